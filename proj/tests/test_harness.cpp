#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include <omp.h>

#include "ewd/harness.hpp"
#include "json.hpp"

using namespace ewd;

namespace {

ExperimentConfig parse(const std::string &text) {
    std::istringstream in(text);
    return parse_config(in);
}

std::string error_of(const std::string &text) {
    try {
        parse(text).validate();
    } catch (const std::exception &e) {
        return e.what();
    }
    return "";
}

ExperimentConfig small_run() {
    ExperimentConfig c;
    c.code = CodeKind::XZZX;
    c.distances = {3, 5};
    c.error_rates = {0.05, 0.15};
    c.n_syndromes = 40;
    c.seed = 21;
    c.sampler.steps = 3000;
    return c;
}


}  // namespace

TEST_CASE("config parsing") {
    ExperimentConfig c = parse(
        "# sweep\n"
        "code = rotated\n"
        "d = 5, 7\n"
        "p = 0.16:0.20:0.01   # inclusive\n"
        "alpha = inf\n"
        "decoder = all\n"
        "n_syndromes = 1e4\n"
        "seed = 42\n"
        "p_sample = 0.25\n"
        "steps = 5000\n"
        "record-stride = 3\n"
        "explore_trivial = yes\n"
        "pt_layers = 9\n"
        "out = run.csv\n");
    CHECK(c.code == CodeKind::RotatedSurface);
    CHECK(c.distances == std::vector<int>{5, 7});
    CHECK(c.error_rates == std::vector<double>{0.16, 0.17, 0.18, 0.19, 0.2});
    CHECK(std::isinf(c.noise.alpha_x));
    CHECK(std::isinf(c.noise.alpha_y));
    CHECK(c.decoder == DecoderKind::All);
    CHECK(c.n_syndromes == 10000);
    CHECK(c.seed == 42);
    CHECK(c.sampler.p_sample == 0.25);
    CHECK(c.sampler.steps == 5000);
    CHECK(c.sampler.record_stride == 3);
    CHECK(c.sampler.explore_trivial);
    CHECK(c.pt.n_layers == 9);
    CHECK(c.out == "run.csv");
    c.validate();

    ExperimentConfig e = parse("p = 0.1, 0.3\neta = 10\n");
    REQUIRE(e.noise.eta);
    NoiseParams n = e.noise.at(0.3);
    CHECK(n.p_z / (n.p_x + n.p_y) == doctest::Approx(10.0).epsilon(1e-8));

    CHECK(parse("alpha_x = 2\nalpha_y = 3.5\n").noise.alpha_y == 3.5);
    CHECK(parse_real(" Infinity ") == kInfinity);
    CHECK_THROWS_AS(parse_real("1.5x"), std::invalid_argument);

    for (const char *name : {"ewd", "all", "mcmc-pt", "exact-mld"}) {
        CHECK(decoder_name(parse_decoder(name)) == name);
    }
    CHECK(parse_decoder("exact") == DecoderKind::ExactMLD);
    CHECK_THROWS_AS(parse_decoder("bp"), std::invalid_argument);
}

TEST_CASE("config errors") {
    CHECK(error_of("d = 3\nnonsense\n").find("line 2") != std::string::npos);
    CHECK(error_of("d = 3\n\nflavour = 1\n").find("line 3") != std::string::npos);
    CHECK(error_of("d = 3\nn = -4\n").find("line 2") != std::string::npos);
    CHECK(error_of("p = 0.3:0.1:0.1\n").find("line 1") != std::string::npos);
    CHECK(error_of("explore_trivial = maybe\n") != "");
    CHECK(error_of("d = 4\n") != "");
    CHECK(error_of("d = 1\n") != "");
    CHECK(error_of("p = 1\n") != "");
    CHECK(error_of("alpha = 0.9\n") != "");
    CHECK(error_of("p_sample = 0\n") != "");
    CHECK(error_of("steps = 2\nrecord_stride = 5\n") != "");
    CHECK(error_of("d = 7\ndecoder = exact\n") != "");
    CHECK(error_of("pt_layers = 1\n") != "");
    CHECK(error_of("n = 0\n") != "");
    CHECK(error_of("p = 0\ndecoder = pt\n") != "");
    CHECK(error_of("d = 3\np = 0, 0.1\n") == "");
    CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), std::invalid_argument);
}

TEST_CASE("binomial sigma") {
    CHECK(binomial_sigma(0, 100) == 0.0);
    CHECK(binomial_sigma(50, 100) == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(binomial_sigma(1, 4) == doctest::Approx(std::sqrt(0.25 * 0.75 / 4)).epsilon(1e-14));
    CHECK(binomial_sigma(0, 0) == 0.0);
}

TEST_CASE("CSV and JSON formats") {
    CHECK(format_real(0.1) == "0.1");
    CHECK(format_real(kInfinity) == "inf");
    CHECK(format_real(1.0) == "1");

    FailurePoint pt;
    pt.decoder = "ewd";
    pt.code = CodeKind::RotatedSurface;
    pt.d = 5;
    pt.p = 0.15;
    pt.alpha_x = 1;
    pt.alpha_y = kInfinity;
    pt.n_syndromes = 200;
    pt.n_failures = 10;
    pt.p_fail = 0.05;
    pt.sigma = binomial_sigma(10, 200);
    pt.seed = 3;
    std::string row = failure_csv_row(pt);
    CHECK(row.rfind("ewd,rotated,5,0.15,1,inf,200,10,0.05,", 0) == 0);
    CHECK(row.substr(row.rfind(',')) == ",3");

    std::ostringstream out;
    write_failure_csv(out, {pt, pt});
    std::string text = out.str();
    CHECK(text.rfind(std::string(kFailureCsvHeader) + "\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);

    CodeLayout layout = build_code(CodeKind::XZZX, 3);
    PauliChain c(9);
    c.set(4, Pauli::Y);
    DecodeRecord r;
    r.decoder = "ewd";
    r.d = 3;
    r.p = 0.1;
    r.index = 7;
    r.sub_seed = 99;
    r.syndrome = compute_syndrome(layout, c);
    r.true_class = logical_class(layout, c);
    SamplerConfig sc;
    sc.steps = 2000;
    r.decision = decode(layout, r.syndrome, noise_from_alpha(0.1, 1, 1), sc);
    auto j = nlohmann::json::parse(record_json(r));
    CHECK(j["decoder"] == "ewd");
    CHECK(j["code"] == "xzzx");
    CHECK(j["d"] == 3);
    CHECK(j["index"] == 7);
    CHECK(j["seed"] == 99);
    CHECK(j["syndrome"] == r.syndrome.str());
    CHECK(j["true_class"] == std::string(1, class_char(r.true_class)));
    CHECK(j["chosen"] == std::string(1, class_char(r.decision.chosen)));
    REQUIRE(j["probabilities"].size() == 4);
    REQUIRE(j["octet"].size() == 4);
    CHECK(j["octet"][class_index(r.decision.chosen)][1].get<uint64_t>() >= 1);
    CHECK(j["fast_path"] == false);
    CHECK(record_json(r).find('\n') == std::string::npos);
}

TEST_CASE("seeds") {
    std::set<uint64_t> seen;
    for (int d : {3, 5}) {
        for (size_t pi = 0; pi < 3; pi++) {
            for (uint64_t i = 0; i < 100; i++) {
                seen.insert(syndrome_seed(1, d, pi, i));
            }
        }
    }
    CHECK(seen.size() == 600);
    CHECK(syndrome_seed(1, 3, 0, 0) == syndrome_seed(1, 3, 0, 0));
    CHECK(syndrome_seed(1, 3, 0, 0) != syndrome_seed(2, 3, 0, 0));
}

TEST_CASE("parallel and serial failure-rate runners agree") {
    omp_set_num_threads(4);
    for (DecoderKind kind : {DecoderKind::EWD, DecoderKind::All, DecoderKind::ExactMLD, DecoderKind::MCMC_PT}) {
        ExperimentConfig c = small_run();
        c.decoder = kind;
        if (kind == DecoderKind::MCMC_PT || kind == DecoderKind::ExactMLD) {
            c.distances = {3};
            c.pt.total_sweeps = 300;
        }
        std::vector<std::string> par_records, ser_records;
        auto par = run_failure_rate(c, [&](const DecodeRecord &r) { par_records.push_back(record_json(r)); });
        auto ser = run_failure_rate_serial(c, [&](const DecodeRecord &r) { ser_records.push_back(record_json(r)); });
        REQUIRE(par.size() == c.distances.size() * c.error_rates.size());
        CAPTURE(decoder_name(kind));
        for (size_t k = 0; k < par.size(); k++) {
            CHECK(failure_csv_row(par[k]) == failure_csv_row(ser[k]));
            CHECK(par[k].n_syndromes == c.n_syndromes);
            CHECK(par[k].p_fail == static_cast<double>(par[k].n_failures) / c.n_syndromes);
        }
        CHECK(par_records.size() == c.n_syndromes * par.size());
        CHECK(par_records == ser_records);
        // Records arrive in index order within each grid point.
        for (size_t k = 0; k < par_records.size(); k++) {
            CHECK(nlohmann::json::parse(par_records[k])["index"] == k % c.n_syndromes);
        }
    }
}

TEST_CASE("failure counts match the records") {
    ExperimentConfig c = small_run();
    c.distances = {3};
    c.error_rates = {0.2};
    c.n_syndromes = 200;
    uint64_t wrong = 0;
    auto pts = run_failure_rate(c, [&](const DecodeRecord &r) { wrong += r.true_class != r.decision.chosen; });
    CHECK(pts[0].n_failures == wrong);
}

TEST_CASE("zero error rate never fails") {
    for (DecoderKind kind : {DecoderKind::EWD, DecoderKind::All, DecoderKind::ExactMLD}) {
        for (CodeKind code : {CodeKind::XZZX, CodeKind::RotatedSurface}) {
            ExperimentConfig c = small_run();
            c.code = code;
            c.decoder = kind;
            c.distances = {3};
            c.error_rates = {0.0};
            c.noise.alpha_x = c.noise.alpha_y = 3.0;
            auto pts = run_failure_rate(c);
            CAPTURE(decoder_name(kind));
            CAPTURE(code_name(code));
            CHECK(pts[0].n_failures == 0);
            CHECK(pts[0].p_fail == 0.0);
            CHECK(pts[0].sigma == 0.0);
        }
    }
}

TEST_CASE("fixed-weight chains") {
    Rng rng(71);
    std::array<uint64_t, 4> by_pauli{};
    std::vector<uint64_t> by_site(25, 0);
    for (int trial = 0; trial < 20000; trial++) {
        PauliChain c = random_fixed_weight_chain(25, 3, rng);
        CHECK(count_paulis(c).total() == 3);
        for (size_t q = 0; q < 25; q++) {
            by_pauli[static_cast<size_t>(c.get(q))]++;
            by_site[q] += c.get(q) != Pauli::I;
        }
    }
    // 60000 errors: uniform over the three Paulis and the 25 sites.
    for (size_t k = 1; k < 4; k++) {
        CHECK(std::abs(static_cast<double>(by_pauli[k]) - 20000.0) < 5 * std::sqrt(20000.0 * 2 / 3));
    }
    for (uint64_t n : by_site) {
        CHECK(std::abs(static_cast<double>(n) - 2400.0) < 5 * std::sqrt(2400.0));
    }
    CHECK(random_fixed_weight_chain(9, 9, rng).is_identity() == false);
    CHECK(count_paulis(random_fixed_weight_chain(9, 9, rng)).total() == 9);
    CHECK(random_fixed_weight_chain(9, 0, rng).is_identity());
}

TEST_CASE("weight-2 fraction at d = 3: EWD against exhaustive decoding over every chain") {
    CodeLayout layout = build_code(CodeKind::XZZX, 3);
    NoiseParams noise = noise_from_alpha(1e-3, 1, 1);
    SamplerConfig sc;
    sc.seed = 5;
    sc.keep_histograms = false;
    int disagreements = 0;
    FractionResult exact = exhaustive_weight_fraction(layout, 2, [&](const Syndrome &s, const PauliChain &) {
        return exact_mld(layout, s, noise).chosen;
    });
    // EWD finds the exact lightest weights and degeneracies, and decides as the
    // limit rule does on them. Exact probabilities at p_eval can split limit
    // ties through heavier bins, so only the failure totals are compared there.
    FractionResult ewd = exhaustive_weight_fraction(layout, 2, [&](const Syndrome &s, const PauliChain &) {
        Decision dec = decode(layout, s, noise, sc);
        Octet exact_octet = octet_of(exact_mld(layout, s, noise).histograms);
        // Weight-2 boundary stabilizers have a trivial syndrome and skip exploration.
        bool bad = (!dec.fast_path && dec.octet != exact_octet) || dec.chosen != limit_choice(exact_octet);
        disagreements += bad;
        return dec.chosen;
    });
    CHECK(exact.n == 36 * 9);
    CHECK(ewd.n == exact.n);
    CHECK(disagreements == 0);
    CHECK(ewd.failures == exact.failures);
    CHECK(exact.fraction == static_cast<double>(exact.failures) / exact.n);
    CHECK(exact.failures > 0);

    // Sampled estimate from the harness runner.
    WeightFractionConfig wf;
    wf.d = 3;
    wf.n_chains = 4000;
    wf.seed = 8;
    FractionResult sampled = run_weight_fraction(wf);
    CHECK(sampled.n == 4000);
    double sigma = std::sqrt(exact.fraction * (1 - exact.fraction) / sampled.n);
    CHECK(std::abs(sampled.fraction - exact.fraction) <= 4 * sigma);

    // Weight 1 is always corrected.
    FractionResult w1 = exhaustive_weight_fraction(layout, 1, [&](const Syndrome &s, const PauliChain &) {
        return exact_mld(layout, s, noise).chosen;
    });
    CHECK(w1.n == 27);
    CHECK(w1.failures == 0);
}

TEST_CASE("weight fraction runners agree") {
    omp_set_num_threads(3);
    WeightFractionConfig wf;
    wf.d = 5;
    wf.n_chains = 60;
    wf.seed = 12;
    wf.sampler.steps = 4000;
    FractionResult par = run_weight_fraction(wf);
    FractionResult ser = run_weight_fraction_serial(wf);
    CHECK(par.failures == ser.failures);
    CHECK(par.n == ser.n);
    CHECK(par.sigma == ser.sigma);
}

TEST_CASE("percentiles") {
    CHECK(percentile({5, 1, 3}, 0, 0.5) == 3.0);
    CHECK(percentile({1, 2, 3, 4}, 0, 0.5) == 2.0);
    CHECK(percentile({1, 2, 3, 4}, 0, 0.95) == 4.0);
    CHECK(percentile({1, 2, 3, 4}, 0, 0.0) == 1.0);
    CHECK(std::isinf(percentile({1, 2}, 2, 0.95)));
    CHECK(percentile({1, 2}, 2, 0.5) == 2.0);
    CHECK(std::isinf(percentile({}, 3, 0.5)));
    CHECK(percentile({}, 0, 0.5) == 0.0);
}

TEST_CASE("time to light at d = 3") {
    TimeToLightConfig t;
    t.d = 3;
    t.n_instances = 10000;
    t.seed = 4;
    TimeToLightResult r = run_time_to_light(t);
    CHECK(r.n_instances == 10000);
    CHECK(r.steps.size() + r.n_flagged == 10000);
    CHECK(r.steps.size() >= 9900);
    REQUIRE(r.final_weights.size() == r.steps.size());
    for (double w : r.final_weights) {
        CHECK(w == 1.0);
    }
    for (uint64_t s : r.steps) {
        CHECK(s % t.record_stride == 0);
    }
    CHECK(r.p50 <= r.p95);

    // Tiny budget flags instances instead of overrunning.
    t.n_instances = 200;
    t.step_budget = 5;
    t.scramble_factor = 100;
    TimeToLightResult tight = run_time_to_light(t);
    CHECK(tight.n_flagged > 0);
    for (uint64_t s : tight.steps) {
        CHECK(s <= 5);
    }
    CHECK_THROWS_AS(run_time_to_light(TimeToLightConfig{.d = 4}), std::invalid_argument);
}

TEST_CASE("time to light grows with distance") {
    double prev = 0.0;
    for (int d : {5, 7, 9}) {
        TimeToLightConfig t;
        t.d = d;
        t.n_instances = 1000;
        t.seed = 6;
        TimeToLightResult r = run_time_to_light(t);
        CAPTURE(d);
        CHECK(r.n_flagged == 0);
        for (double w : r.final_weights) {
            CHECK(w == (d - 1) / 2);
        }
        CHECK(r.p50 > prev);
        prev = r.p50;
    }
}

TEST_CASE("probability sweep from stored histograms") {
    CodeLayout layout = build_code(CodeKind::XZZX, 5);
    NoiseParams noise = noise_from_alpha(0.15, 1, 1);
    Rng rng(81);
    std::vector<double> grid;
    for (int k = 1; k <= 50; k++) {
        grid.push_back(0.006 * k);
    }
    SamplerConfig sc;
    sc.steps = 20000;
    sc.explore_trivial = true;
    for (int i = 0; i < 10; i++) {
        Syndrome s = compute_syndrome(layout, sample_chain(noise, 25, rng));
        sc.seed = static_cast<uint64_t>(i);
        Decision dec = decode(layout, s, noise, sc);
        REQUIRE(dec.histograms);
        auto rows = run_probability_sweep(*dec.histograms, 1, 1, grid);
        REQUIRE(rows.size() == grid.size());
        auto again = run_probability_sweep(*dec.histograms, 1, 1, grid);
        for (size_t k = 0; k < rows.size(); k++) {
            CHECK(rows[k].p == grid[k]);
            CHECK(rows[k].ewd == again[k].ewd);
            CHECK(rows[k].all == again[k].all);
            double se = 0, sa = 0;
            for (size_t c = 0; c < 4; c++) {
                se += rows[k].ewd[c];
                sa += rows[k].all[c];
            }
            CHECK(std::abs(se - 1.0) <= 1e-12);
            CHECK(std::abs(sa - 1.0) <= 1e-12);
        }
        // The decision itself equals the sweep at the decoding rate.
        auto at = run_probability_sweep(*dec.histograms, 1, 1, {0.15});
        for (size_t c = 0; c < 4; c++) {
            CHECK(at[0].ewd[c] == doctest::Approx(dec.probabilities[c]).epsilon(1e-12));
        }
    }
}

TEST_CASE("oracle check") {
    OracleCheckResult r = oracle_check(CodeKind::RotatedSurface, 3, noise_from_alpha(0.1, 1, 1), 300, 2, {});
    CHECK(r.n == 300);
    CHECK(r.fraction == static_cast<double>(r.agreements) / 300);
    CHECK(r.fraction >= 0.99);
}

TEST_CASE("worker count from the environment") {
    setenv("EWD_THREADS", "3", 1);
    configure_workers_from_env();
    CHECK(omp_get_max_threads() == 3);
    setenv("EWD_THREADS", "1", 1);
    configure_workers_from_env();
    CHECK(omp_get_max_threads() == 1);
    setenv("EWD_THREADS", "junk", 1);
    configure_workers_from_env();
    CHECK(omp_get_max_threads() == 1);
    unsetenv("EWD_THREADS");
}
