// Serial reference vs OpenMP kernels, plus the single-walker step rate.
#include <benchmark/benchmark.h>

#include "ewd/harness.hpp"
#include "ewd/walker.hpp"

using namespace ewd;

namespace {

Syndrome sample_syndrome(const CodeLayout &layout, double p, uint64_t seed) {
    Rng rng(seed);
    return compute_syndrome(layout, sample_chain(noise_from_alpha(p, 1, 1), layout.n_qubits(), rng));
}

void BM_ExactCountsSerial(benchmark::State &state) {
    CodeLayout layout = build_code(CodeKind::XZZX, static_cast<int>(state.range(0)));
    Syndrome s = sample_syndrome(layout, 0.15, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_class_counts_serial(layout, s));
    }
}

void BM_ExactCountsParallel(benchmark::State &state) {
    CodeLayout layout = build_code(CodeKind::XZZX, static_cast<int>(state.range(0)));
    Syndrome s = sample_syndrome(layout, 0.15, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_class_counts(layout, s));
    }
}

ExperimentConfig failure_config(int d) {
    ExperimentConfig c;
    c.distances = {d};
    c.error_rates = {0.15};
    c.n_syndromes = 64;
    c.seed = 3;
    return c;
}

void BM_FailureRateSerial(benchmark::State &state) {
    ExperimentConfig c = failure_config(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_failure_rate_serial(c));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(c.n_syndromes));
}

void BM_FailureRateParallel(benchmark::State &state) {
    ExperimentConfig c = failure_config(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_failure_rate(c));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(c.n_syndromes));
}

WeightFractionConfig fraction_config() {
    WeightFractionConfig c;
    c.d = 5;
    c.n_chains = 64;
    c.seed = 4;
    return c;
}

void BM_WeightFractionSerial(benchmark::State &state) {
    WeightFractionConfig c = fraction_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_weight_fraction_serial(c));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(c.n_chains));
}

void BM_WeightFractionParallel(benchmark::State &state) {
    WeightFractionConfig c = fraction_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_weight_fraction(c));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(c.n_chains));
}

void BM_WalkerStep(benchmark::State &state) {
    int d = static_cast<int>(state.range(0));
    CodeLayout layout = build_code(CodeKind::XZZX, d);
    Rng rng(5);
    Syndrome s = sample_syndrome(layout, 0.15, 6);
    ChainWalker w(layout, 1, 1, noise_from_alpha(0.3, 1, 1).beta, initial_chain(layout, s, ClassLabel::I, rng));
    for (auto _ : state) {
        w.step(rng);
    }
    benchmark::DoNotOptimize(w.weight());
    state.SetItemsProcessed(state.iterations());
}

void BM_Explore(benchmark::State &state) {
    int d = static_cast<int>(state.range(0));
    CodeLayout layout = build_code(CodeKind::XZZX, d);
    Rng rng(7);
    Syndrome s = sample_syndrome(layout, 0.15, 8);
    PauliChain start = initial_chain(layout, s, ClassLabel::I, rng);
    SamplerConfig sc;
    sc.steps = 100000;
    NoiseParams sample_noise = noise_from_alpha(sc.p_sample, 1, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(metropolis_explore(layout, sample_noise, sc, start, rng));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(sc.steps));
}

}  // namespace

BENCHMARK(BM_ExactCountsSerial)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactCountsParallel)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FailureRateSerial)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FailureRateParallel)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_WeightFractionSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WeightFractionParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_WalkerStep)->Arg(5)->Arg(9);
BENCHMARK(BM_Explore)->Arg(5)->Arg(9)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
