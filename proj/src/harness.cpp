#include "ewd/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

#include "ewd/walker.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ewd {

std::string decoder_name(DecoderKind kind) {
    switch (kind) {
        case DecoderKind::EWD: return "ewd";
        case DecoderKind::All: return "all";
        case DecoderKind::MCMC_PT: return "mcmc-pt";
        case DecoderKind::ExactMLD: return "exact-mld";
    }
    return "?";
}

DecoderKind parse_decoder(std::string_view text) {
    std::string t(text);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (t == "ewd") return DecoderKind::EWD;
    if (t == "all") return DecoderKind::All;
    if (t == "mcmc-pt" || t == "mcmc" || t == "pt") return DecoderKind::MCMC_PT;
    if (t == "exact-mld" || t == "exact" || t == "mld") return DecoderKind::ExactMLD;
    throw std::invalid_argument("unknown decoder: " + t);
}

NoiseParams NoiseSpec::at(double p) const {
    if (eta && p > 0.0) {
        return noise_from_eta(p, *eta);
    }
    return noise_from_alpha(p, alpha_x, alpha_y);
}

double binomial_sigma(uint64_t failures, uint64_t n) {
    if (n == 0) {
        return 0.0;
    }
    double f = static_cast<double>(failures) / static_cast<double>(n);
    return std::sqrt(f * (1.0 - f) / static_cast<double>(n));
}

FailurePoint make_failure_point(const ExperimentConfig &config, int d, double p, const NoiseParams &noise,
                                uint64_t n, uint64_t failures) {
    FailurePoint pt;
    pt.decoder = decoder_name(config.decoder);
    pt.code = config.code;
    pt.d = d;
    pt.p = p;
    pt.alpha_x = noise.alpha_x;
    pt.alpha_y = noise.alpha_y;
    pt.n_syndromes = n;
    pt.n_failures = failures;
    pt.p_fail = n ? static_cast<double>(failures) / static_cast<double>(n) : 0.0;
    pt.sigma = binomial_sigma(failures, n);
    pt.seed = config.seed;
    return pt;
}

uint64_t syndrome_seed(uint64_t master, int d, size_t p_index, uint64_t index) {
    return derive_seed(master, {static_cast<uint64_t>(d), static_cast<uint64_t>(p_index), index});
}

Decision run_decoder(const ExperimentConfig &config, const CodeLayout &layout, const Syndrome &s,
                     const NoiseParams &noise, uint64_t seed) {
    switch (config.decoder) {
        case DecoderKind::EWD:
        case DecoderKind::All: {
            SamplerConfig sc = config.sampler;
            sc.seed = seed;
            sc.keep_histograms = false;
            return decode(layout, s, noise, sc,
                          config.decoder == DecoderKind::EWD ? ProbabilityMode::EWD : ProbabilityMode::All);
        }
        case DecoderKind::MCMC_PT: {
            PTConfig pc = config.pt;
            pc.seed = seed;
            return mcmc_pt_decode(layout, s, noise, pc);
        }
        case DecoderKind::ExactMLD: {
            ExactResult r = exact_mld(layout, s, noise);
            Decision out;
            out.probabilities = r.probabilities;
            out.chosen = r.chosen;
            out.octet = octet_of(r.histograms);
            for (size_t k = 0; k < 4; k++) {
                out.dominance[k] = dominance_diagnostic(r.histograms[k], noise.beta);
            }
            return out;
        }
    }
    throw std::logic_error("unhandled decoder kind");
}

namespace {

struct Outcome {
    bool failed = false;
    std::optional<DecodeRecord> record;
};

Outcome decode_syndrome(const ExperimentConfig &config, const CodeLayout &layout, const NoiseParams &noise,
                        double p, size_t p_index, uint64_t index, bool want_record) {
    uint64_t sub = syndrome_seed(config.seed, layout.distance(), p_index, index);
    Rng rng(derive_seed(sub, {0}));
    PauliChain chain = sample_chain(noise, layout.n_qubits(), rng);
    Syndrome s = compute_syndrome(layout, chain);
    ClassLabel truth = logical_class(layout, chain);
    Decision decision = run_decoder(config, layout, s, noise, derive_seed(sub, {1}));
    Outcome out;
    out.failed = decision.chosen != truth;
    if (want_record) {
        out.record = DecodeRecord{decoder_name(config.decoder), config.code, layout.distance(), p, index, sub,
                                  std::move(s), truth, std::move(decision)};
    }
    return out;
}

std::vector<FailurePoint> failure_rate_impl(const ExperimentConfig &config, const RecordSink &sink, bool parallel) {
    config.validate();
    std::vector<FailurePoint> points;
    bool want = static_cast<bool>(sink);
    for (int d : config.distances) {
        CodeLayout layout = build_code(config.code, d);
        for (size_t pi = 0; pi < config.error_rates.size(); pi++) {
            double p = config.error_rates[pi];
            NoiseParams noise = config.noise.at(p);
            auto n = static_cast<int64_t>(config.n_syndromes);
            std::vector<Outcome> outcomes(static_cast<size_t>(n));
            if (parallel) {
#pragma omp parallel for schedule(dynamic, 4)
                for (int64_t i = 0; i < n; i++) {
                    outcomes[static_cast<size_t>(i)] =
                        decode_syndrome(config, layout, noise, p, pi, static_cast<uint64_t>(i), want);
                }
            } else {
                for (int64_t i = 0; i < n; i++) {
                    outcomes[static_cast<size_t>(i)] =
                        decode_syndrome(config, layout, noise, p, pi, static_cast<uint64_t>(i), want);
                }
            }
            uint64_t failures = 0;
            for (auto &o : outcomes) {
                failures += o.failed;
                if (want) {
                    sink(*o.record);
                }
            }
            points.push_back(make_failure_point(config, d, p, noise, config.n_syndromes, failures));
        }
    }
    return points;
}

}  // namespace

std::vector<FailurePoint> run_failure_rate(const ExperimentConfig &config, const RecordSink &sink) {
    return failure_rate_impl(config, sink, true);
}

std::vector<FailurePoint> run_failure_rate_serial(const ExperimentConfig &config, const RecordSink &sink) {
    return failure_rate_impl(config, sink, false);
}

std::string format_real(double x) {
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

std::string failure_csv_row(const FailurePoint &pt) {
    return pt.decoder + "," + code_name(pt.code) + "," + std::to_string(pt.d) + "," + format_real(pt.p) + "," +
           format_real(pt.alpha_x) + "," + format_real(pt.alpha_y) + "," + std::to_string(pt.n_syndromes) + "," +
           std::to_string(pt.n_failures) + "," + format_real(pt.p_fail) + "," + format_real(pt.sigma) + "," +
           std::to_string(pt.seed);
}

void write_failure_csv(std::ostream &out, const std::vector<FailurePoint> &points) {
    out << kFailureCsvHeader << "\n";
    for (const auto &pt : points) {
        out << failure_csv_row(pt) << "\n";
    }
}

std::string record_json(const DecodeRecord &r) {
    using nlohmann::json;
    auto real = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
    json octet = json::array();
    for (const auto &e : r.decision.octet) {
        octet.push_back(e.explored() ? json::array({real(e.w_star), e.n_star}) : json(nullptr));
    }
    json j = {
        {"decoder", r.decoder},
        {"code", code_name(r.code)},
        {"d", r.d},
        {"p", r.p},
        {"index", r.index},
        {"seed", r.sub_seed},
        {"syndrome", r.syndrome.str()},
        {"true_class", std::string(1, class_char(r.true_class))},
        {"chosen", std::string(1, class_char(r.decision.chosen))},
        {"probabilities", r.decision.probabilities},
        {"octet", octet},
        {"dominance", r.decision.dominance},
        {"fast_path", r.decision.fast_path},
    };
    return j.dump();
}

PauliChain random_fixed_weight_chain(size_t n_qubits, size_t weight, Rng &rng) {
    if (weight > n_qubits) {
        throw std::invalid_argument("chain weight exceeds qubit count");
    }
    std::vector<uint32_t> qubits(n_qubits);
    std::iota(qubits.begin(), qubits.end(), 0u);
    PauliChain c(n_qubits);
    for (size_t k = 0; k < weight; k++) {
        size_t j = k + uniform_index(rng, n_qubits - k);
        std::swap(qubits[k], qubits[j]);
        static constexpr Pauli kErrors[] = {Pauli::X, Pauli::Y, Pauli::Z};
        c.set(qubits[k], kErrors[uniform_index(rng, 3)]);
    }
    return c;
}

namespace {

FractionResult fraction_result(uint64_t n, uint64_t failures) {
    FractionResult r;
    r.n = n;
    r.failures = failures;
    r.fraction = n ? static_cast<double>(failures) / static_cast<double>(n) : 0.0;
    r.sigma = binomial_sigma(failures, n);
    return r;
}

bool weight_fraction_trial(const WeightFractionConfig &config, const CodeLayout &layout, const NoiseParams &noise,
                           uint64_t i) {
    Rng rng(derive_seed(config.seed, {i, 0}));
    PauliChain c = random_fixed_weight_chain(layout.n_qubits(), static_cast<size_t>(config.d + 1) / 2, rng);
    SamplerConfig sc = config.sampler;
    sc.seed = derive_seed(config.seed, {i, 1});
    sc.keep_histograms = false;
    Decision dec = decode(layout, compute_syndrome(layout, c), noise, sc, ProbabilityMode::EWD);
    return dec.chosen != logical_class(layout, c);
}

FractionResult weight_fraction_impl(const WeightFractionConfig &config, bool parallel) {
    if (config.d < 3 || config.d % 2 == 0) {
        throw std::invalid_argument("weight fraction needs an odd distance >= 3");
    }
    CodeLayout layout = build_code(config.code, config.d);
    NoiseParams noise = noise_from_alpha(config.p_eval, 1.0, 1.0);
    auto n = static_cast<int64_t>(config.n_chains);
    uint64_t failures = 0;
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : failures)
        for (int64_t i = 0; i < n; i++) {
            failures += weight_fraction_trial(config, layout, noise, static_cast<uint64_t>(i));
        }
    } else {
        for (int64_t i = 0; i < n; i++) {
            failures += weight_fraction_trial(config, layout, noise, static_cast<uint64_t>(i));
        }
    }
    return fraction_result(config.n_chains, failures);
}

}  // namespace

FractionResult run_weight_fraction(const WeightFractionConfig &config) { return weight_fraction_impl(config, true); }

FractionResult run_weight_fraction_serial(const WeightFractionConfig &config) {
    return weight_fraction_impl(config, false);
}

FractionResult exhaustive_weight_fraction(
    const CodeLayout &layout, size_t weight,
    const std::function<ClassLabel(const Syndrome &, const PauliChain &)> &decide) {
    size_t n = layout.n_qubits();
    uint64_t total = 0;
    uint64_t failures = 0;
    std::vector<size_t> sites(weight);
    std::iota(sites.begin(), sites.end(), 0);
    static constexpr Pauli kErrors[] = {Pauli::X, Pauli::Y, Pauli::Z};
    while (true) {
        size_t patterns = 1;
        for (size_t k = 0; k < weight; k++) {
            patterns *= 3;
        }
        for (size_t code = 0; code < patterns; code++) {
            PauliChain c(n);
            size_t rest = code;
            for (size_t k = 0; k < weight; k++) {
                c.set(sites[k], kErrors[rest % 3]);
                rest /= 3;
            }
            total++;
            failures += decide(compute_syndrome(layout, c), c) != logical_class(layout, c);
        }
        // Next combination in lexicographic order.
        size_t k = weight;
        while (k > 0 && sites[k - 1] == n - weight + k - 1) {
            k--;
        }
        if (k == 0) {
            break;
        }
        sites[k - 1]++;
        for (size_t j = k; j < weight; j++) {
            sites[j] = sites[j - 1] + 1;
        }
    }
    return fraction_result(total, failures);
}

double percentile(std::vector<uint64_t> values, uint64_t flagged, double q) {
    uint64_t total = values.size() + flagged;
    if (total == 0) {
        return 0.0;
    }
    std::sort(values.begin(), values.end());
    auto rank = static_cast<uint64_t>(std::ceil(q * static_cast<double>(total)));
    rank = std::clamp<uint64_t>(rank, 1, total);
    return rank <= values.size() ? static_cast<double>(values[rank - 1]) : kInfinity;
}

TimeToLightResult run_time_to_light(const TimeToLightConfig &config) {
    if (config.d < 3 || config.d % 2 == 0) {
        throw std::invalid_argument("time-to-light needs an odd distance >= 3");
    }
    CodeLayout layout = build_code(config.code, config.d);
    NoiseParams sample_noise = noise_from_alpha(config.p_sample, 1.0, 1.0);
    const auto target = static_cast<double>((config.d - 1) / 2);
    const uint64_t stride = std::max<uint64_t>(1, config.record_stride);
    auto n = static_cast<int64_t>(config.n_instances);
    // Attempts per class until found; UINT64_MAX marks a flagged instance.
    std::vector<uint64_t> found_at(static_cast<size_t>(n), UINT64_MAX);
    std::vector<double> final_weight(static_cast<size_t>(n), kInfinity);

#pragma omp parallel for schedule(dynamic, 1)
    for (int64_t i = 0; i < n; i++) {
        Rng rng(derive_seed(config.seed, {static_cast<uint64_t>(i)}));
        PauliChain light =
            random_fixed_weight_chain(layout.n_qubits(), static_cast<size_t>(config.d - 1) / 2, rng);
        std::vector<ChainWalker> walkers;
        walkers.reserve(4);
        for (ClassLabel c : kAllClasses) {
            PauliChain start = compose(light, layout.logical(c));
            scramble(layout, start, config.scramble_factor * layout.n_qubits(), rng);
            walkers.emplace_back(layout, 1.0, 1.0, sample_noise.beta, std::move(start));
        }
        auto check = [&](uint64_t t) {
            for (const auto &w : walkers) {
                // Exact match: a seed can share its syndrome with lighter
                // chains, which do not end the search.
                if (std::abs(w.weight() - target) <= kWeightTolerance) {
                    found_at[static_cast<size_t>(i)] = t;
                    final_weight[static_cast<size_t>(i)] = w.weight();
                    return true;
                }
            }
            return false;
        };
        if (check(0)) {
            continue;
        }
        for (uint64_t t = 1; t <= config.step_budget; t++) {
            for (auto &w : walkers) {
                w.step(rng);
            }
            if (t % stride == 0 && check(t)) {
                break;
            }
        }
    }

    TimeToLightResult r;
    r.n_instances = config.n_instances;
    for (size_t i = 0; i < found_at.size(); i++) {
        if (found_at[i] == UINT64_MAX) {
            r.n_flagged++;
        } else {
            r.steps.push_back(found_at[i]);
            r.final_weights.push_back(final_weight[i]);
        }
    }
    r.p50 = percentile(r.steps, r.n_flagged, 0.50);
    r.p95 = percentile(r.steps, r.n_flagged, 0.95);
    return r;
}

std::vector<SweepRow> run_probability_sweep(const std::array<ClassHistogram, 4> &hists, double alpha_x,
                                            double alpha_y, const std::vector<double> &error_rates) {
    std::vector<SweepRow> rows;
    rows.reserve(error_rates.size());
    for (double p : error_rates) {
        double beta = noise_from_alpha(p, alpha_x, alpha_y).beta;
        rows.push_back({p, class_probabilities(hists, beta, ProbabilityMode::EWD),
                        class_probabilities(hists, beta, ProbabilityMode::All)});
    }
    return rows;
}

OracleCheckResult oracle_check(CodeKind code, int d, const NoiseParams &noise, uint64_t n, uint64_t seed,
                               const SamplerConfig &sampler) {
    CodeLayout layout = build_code(code, d);
    auto count = static_cast<int64_t>(n);
    uint64_t agreements = 0;
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : agreements)
    for (int64_t i = 0; i < count; i++) {
        Rng rng(derive_seed(seed, {static_cast<uint64_t>(i), 0}));
        PauliChain c = sample_chain(noise, layout.n_qubits(), rng);
        Syndrome s = compute_syndrome(layout, c);
        SamplerConfig sc = sampler;
        sc.seed = derive_seed(seed, {static_cast<uint64_t>(i), 1});
        sc.keep_histograms = false;
        ClassLabel ewd = decode(layout, s, noise, sc).chosen;
        auto exact = exact_from_counts(exact_class_counts_serial(layout, s), noise).probabilities;
        // Any class in the exact argmax set counts as agreement.
        double best = *std::max_element(exact.begin(), exact.end());
        agreements += exact[class_index(ewd)] >= best * (1 - 1e-9);
    }
    OracleCheckResult r;
    r.n = n;
    r.agreements = agreements;
    r.fraction = n ? static_cast<double>(agreements) / static_cast<double>(n) : 0.0;
    return r;
}

void configure_workers_from_env() {
#ifdef _OPENMP
    if (const char *env = std::getenv("EWD_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) {
            omp_set_num_threads(n);
        }
    }
#endif
}

}  // namespace ewd
