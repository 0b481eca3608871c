// Command-line front end for the experiments.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ewd/harness.hpp"

using namespace ewd;

namespace {

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> sets;
    std::optional<uint64_t> seed;
    std::optional<std::string> p_sample;
    std::optional<uint64_t> steps;
    std::optional<std::string> decoder;
    std::optional<std::string> out;
    std::optional<std::string> records;
};

void add_common(CLI::App *cmd, CommonOptions &o) {
    cmd->add_option("-c,--config", o.config_path, "Configuration file (key = value lines)");
    cmd->add_option("--set", o.sets, "Override a configuration key, as key=value");
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--p-sample", o.p_sample, "Sampling error rate of the Metropolis walk");
    cmd->add_option("--steps", o.steps, "Proposal attempts per class");
    cmd->add_option("--decoder", o.decoder, "ewd, all, mcmc-pt or exact-mld");
    cmd->add_option("--out", o.out, "CSV output path (default stdout)");
    cmd->add_option("--records", o.records, "JSON-lines output path for per-syndrome decisions");
}

ExperimentConfig resolve(const CommonOptions &o) {
    ExperimentConfig config = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
    for (const auto &kv : o.sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        }
        apply_config_value(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (o.seed) config.seed = *o.seed;
    if (o.p_sample) apply_config_value(config, "p_sample", *o.p_sample);
    if (o.steps) config.sampler.steps = *o.steps;
    if (o.decoder) config.decoder = parse_decoder(*o.decoder);
    if (o.out) config.out = *o.out;
    if (o.records) config.records = *o.records;
    config.validate();
    return config;
}

// stdout unless a path is given.
class Output {
  public:
    explicit Output(const std::string &path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) {
                throw std::runtime_error("cannot open '" + path + "' for writing");
            }
        }
    }
    std::ostream &stream() { return file_ ? *file_ : std::cout; }

  private:
    std::unique_ptr<std::ofstream> file_;
};

int run_benchmark(const ExperimentConfig &config, bool serial) {
    std::unique_ptr<std::ofstream> records;
    RecordSink sink;
    if (!config.records.empty()) {
        records = std::make_unique<std::ofstream>(config.records);
        if (!*records) {
            throw std::runtime_error("cannot open '" + config.records + "' for writing");
        }
        sink = [&](const DecodeRecord &r) { *records << record_json(r) << "\n"; };
    }
    auto points = serial ? run_failure_rate_serial(config, sink) : run_failure_rate(config, sink);
    Output out(config.out);
    write_failure_csv(out.stream(), points);
    return 0;
}

int run_weight_fraction_cmd(const ExperimentConfig &config, double p_eval) {
    Output out(config.out);
    out.stream() << "code,d,weight,n,failures,fraction,sigma,seed\n";
    for (int d : config.distances) {
        WeightFractionConfig wf;
        wf.code = config.code;
        wf.d = d;
        wf.n_chains = config.n_syndromes;
        wf.seed = config.seed;
        wf.sampler = config.sampler;
        wf.p_eval = p_eval;
        FractionResult r = run_weight_fraction(wf);
        out.stream() << code_name(config.code) << "," << d << "," << (d + 1) / 2 << "," << r.n << ","
                     << r.failures << "," << format_real(r.fraction) << "," << format_real(r.sigma) << ","
                     << config.seed << "\n";
    }
    return 0;
}

int run_time_to_light_cmd(const ExperimentConfig &config, uint64_t budget, uint64_t scramble_factor,
                          const std::string &steps_path) {
    Output out(config.out);
    std::unique_ptr<std::ofstream> steps_out;
    if (!steps_path.empty()) {
        steps_out = std::make_unique<std::ofstream>(steps_path);
        *steps_out << "code,d,steps\n";
    }
    out.stream() << "code,d,n,flagged,p50,p95,budget,p_sample,seed\n";
    for (int d : config.distances) {
        TimeToLightConfig t;
        t.code = config.code;
        t.d = d;
        t.n_instances = config.n_syndromes;
        t.step_budget = budget;
        t.seed = config.seed;
        t.p_sample = config.sampler.p_sample;
        t.record_stride = config.sampler.record_stride;
        t.scramble_factor = scramble_factor;
        TimeToLightResult r = run_time_to_light(t);
        out.stream() << code_name(config.code) << "," << d << "," << r.n_instances << "," << r.n_flagged << ","
                     << format_real(r.p50) << "," << format_real(r.p95) << "," << budget << ","
                     << format_real(t.p_sample) << "," << config.seed << "\n";
        if (steps_out) {
            for (uint64_t s : r.steps) {
                *steps_out << code_name(config.code) << "," << d << "," << s << "\n";
            }
        }
    }
    return 0;
}

// Decodes n_syndromes syndromes at the first (d, p) of the config and
// re-evaluates each over the grid from its stored histograms.
int run_sweep_cmd(ExperimentConfig config, const std::string &grid) {
    ExperimentConfig grid_holder;
    apply_config_value(grid_holder, "p", grid);
    const std::vector<double> &ps = grid_holder.error_rates;
    int d = config.distances.front();
    double p = config.error_rates.front();
    CodeLayout layout = build_code(config.code, d);
    NoiseParams noise = config.noise.at(p);
    Output out(config.out);
    out.stream() << "index,syndrome,p,mode,P_I,P_X,P_Z,P_Y\n";
    for (uint64_t i = 0; i < config.n_syndromes; i++) {
        uint64_t sub = syndrome_seed(config.seed, d, 0, i);
        Rng rng(derive_seed(sub, {0}));
        PauliChain chain = sample_chain(noise, layout.n_qubits(), rng);
        Syndrome s = compute_syndrome(layout, chain);
        SamplerConfig sc = config.sampler;
        sc.seed = derive_seed(sub, {1});
        sc.keep_histograms = true;
        sc.explore_trivial = true;
        Decision dec = decode(layout, s, noise, sc);
        for (const SweepRow &row : run_probability_sweep(*dec.histograms, noise.alpha_x, noise.alpha_y, ps)) {
            for (int mode = 0; mode < 2; mode++) {
                const auto &probs = mode == 0 ? row.ewd : row.all;
                out.stream() << i << "," << s.str() << "," << format_real(row.p) << "," << (mode ? "all" : "ewd");
                for (double x : probs) {
                    out.stream() << "," << format_real(x);
                }
                out.stream() << "\n";
            }
        }
    }
    return 0;
}

int run_oracle_check_cmd(const ExperimentConfig &config) {
    Output out(config.out);
    out.stream() << "code,d,p,alpha_x,alpha_y,n,agreements,fraction,seed\n";
    for (int d : config.distances) {
        for (double p : config.error_rates) {
            NoiseParams noise = config.noise.at(p);
            OracleCheckResult r = oracle_check(config.code, d, noise, config.n_syndromes, config.seed, config.sampler);
            out.stream() << code_name(config.code) << "," << d << "," << format_real(p) << ","
                         << format_real(noise.alpha_x) << "," << format_real(noise.alpha_y) << "," << r.n << ","
                         << r.agreements << "," << format_real(r.fraction) << "," << config.seed << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    configure_workers_from_env();
    CLI::App app{"Effective-weight decoding experiments"};
    app.require_subcommand(1);

    CommonOptions bench_opts, wf_opts, ttl_opts, sweep_opts, oracle_opts;
    bool serial = false;
    double p_eval = 1e-3;
    uint64_t budget = 1000000;
    uint64_t scramble_factor = 100;
    std::string steps_path;
    std::string grid = "0.01:0.3:0.01";
    std::string kind = "xzzx";
    int distance = 3;

    auto *bench = app.add_subcommand("benchmark", "Logical failure rate over a (d, p) grid");
    add_common(bench, bench_opts);
    bench->add_flag("--serial", serial, "Use the single-threaded reference runner");

    auto *wf = app.add_subcommand("weight-fraction", "Failure fraction of weight-(d+1)/2 depolarizing chains");
    add_common(wf, wf_opts);
    wf->add_option("--p-eval", p_eval, "Physical error rate used for the decision");

    auto *ttl = app.add_subcommand("time-to-light", "Attempts needed to find a weight-(d-1)/2 chain");
    add_common(ttl, ttl_opts);
    ttl->add_option("--budget", budget, "Attempts per class before an instance is flagged");
    ttl->add_option("--scramble", scramble_factor, "Scramble with this many generators per qubit");
    ttl->add_option("--steps-out", steps_path, "CSV of per-instance attempt counts");

    auto *sweep = app.add_subcommand("sweep", "Class probabilities over a p grid from stored histograms");
    add_common(sweep, sweep_opts);
    sweep->add_option("--grid", grid, "Comma list or start:stop:step");

    auto *oracle = app.add_subcommand("oracle-check", "EWD against exhaustive decoding");
    add_common(oracle, oracle_opts);

    auto *codes = app.add_subcommand("codes", "Code layouts");
    codes->require_subcommand(1);
    auto *describe_cmd = codes->add_subcommand("describe", "Dump generators and logicals");
    describe_cmd->add_option("--kind", kind, "xzzx or rotated");
    describe_cmd->add_option("--distance,-d", distance, "Odd code distance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }

    try {
        if (*bench) return run_benchmark(resolve(bench_opts), serial);
        if (*wf) return run_weight_fraction_cmd(resolve(wf_opts), p_eval);
        if (*ttl) return run_time_to_light_cmd(resolve(ttl_opts), budget, scramble_factor, steps_path);
        if (*sweep) return run_sweep_cmd(resolve(sweep_opts), grid);
        if (*oracle) return run_oracle_check_cmd(resolve(oracle_opts));
        if (*describe_cmd) {
            std::cout << describe(build_code(parse_code_kind(kind), distance));
            return 0;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
