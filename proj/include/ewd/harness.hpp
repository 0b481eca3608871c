#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ewd/baselines.hpp"
#include "ewd/codes.hpp"
#include "ewd/decoder.hpp"
#include "ewd/noise.hpp"

namespace ewd {

enum class DecoderKind { EWD, All, MCMC_PT, ExactMLD };

std::string decoder_name(DecoderKind kind);
/// Accepts "ewd", "all", "mcmc-pt" (or "pt", "mcmc"), "exact-mld" (or "exact").
DecoderKind parse_decoder(std::string_view text);

/// Relative bias of the noise; the total rate comes from the sweep grid.
struct NoiseSpec {
    double alpha_x = 1.0;
    double alpha_y = 1.0;
    /// When set, alphas are derived per error rate from eta.
    std::optional<double> eta;

    NoiseParams at(double p) const;
};

/// Experiment description, read from a key = value file (see README) and
/// overridable from the command line.
struct ExperimentConfig {
    CodeKind code = CodeKind::XZZX;
    std::vector<int> distances{5};
    std::vector<double> error_rates{0.1};
    NoiseSpec noise;
    DecoderKind decoder = DecoderKind::EWD;
    SamplerConfig sampler;
    PTConfig pt;
    uint64_t n_syndromes = 1000;
    uint64_t seed = 0;
    /// CSV destination; empty writes to stdout.
    std::string out;
    /// Optional JSON-lines destination for per-syndrome decisions.
    std::string records;

    /// Throws std::invalid_argument on an unusable configuration.
    void validate() const;
};

/// Sets one configuration key. Throws std::invalid_argument for unknown keys
/// or malformed values.
void apply_config_value(ExperimentConfig &config, std::string_view key, std::string_view value);
ExperimentConfig parse_config(std::istream &in);
ExperimentConfig load_config(const std::string &path);

/// Parses "inf"/"infinity" as +inf, otherwise a decimal number.
double parse_real(std::string_view text);

struct FailurePoint {
    std::string decoder;
    CodeKind code = CodeKind::XZZX;
    int d = 0;
    double p = 0.0;
    double alpha_x = 1.0;
    double alpha_y = 1.0;
    uint64_t n_syndromes = 0;
    uint64_t n_failures = 0;
    double p_fail = 0.0;
    double sigma = 0.0;
    uint64_t seed = 0;
};

/// sqrt(f (1 - f) / n) with f = failures / n.
double binomial_sigma(uint64_t failures, uint64_t n);
FailurePoint make_failure_point(const ExperimentConfig &config, int d, double p, const NoiseParams &noise,
                                uint64_t n, uint64_t failures);

/// One decoded syndrome, as written to the JSON-lines output.
struct DecodeRecord {
    std::string decoder;
    CodeKind code = CodeKind::XZZX;
    int d = 0;
    double p = 0.0;
    uint64_t index = 0;
    uint64_t sub_seed = 0;
    Syndrome syndrome;
    ClassLabel true_class = ClassLabel::I;
    Decision decision;
};

using RecordSink = std::function<void(const DecodeRecord &)>;

/// Seed of syndrome `index` at grid point (d, p_index).
uint64_t syndrome_seed(uint64_t master, int d, size_t p_index, uint64_t index);

/// Decodes one syndrome with the configured decoder.
Decision run_decoder(const ExperimentConfig &config, const CodeLayout &layout, const Syndrome &s,
                     const NoiseParams &noise, uint64_t seed);

/// Logical failure rate over the (distance, error rate) grid. Syndromes are
/// decoded in parallel; each uses its own sub-seed, so results do not depend
/// on the worker count. Records reach `sink` in index order.
std::vector<FailurePoint> run_failure_rate(const ExperimentConfig &config, const RecordSink &sink = {});
/// Single-threaded reference of run_failure_rate.
std::vector<FailurePoint> run_failure_rate_serial(const ExperimentConfig &config, const RecordSink &sink = {});

inline constexpr const char *kFailureCsvHeader = "decoder,code,d,p,alpha_x,alpha_y,n,failures,p_fail,sigma,seed";
std::string format_real(double x);
std::string failure_csv_row(const FailurePoint &point);
void write_failure_csv(std::ostream &out, const std::vector<FailurePoint> &points);
/// Single-line JSON object for a decoded syndrome.
std::string record_json(const DecodeRecord &record);

/// Uniformly random chain with exactly `weight` non-identity sites, each X, Y
/// or Z with equal probability.
PauliChain random_fixed_weight_chain(size_t n_qubits, size_t weight, Rng &rng);

struct WeightFractionConfig {
    CodeKind code = CodeKind::XZZX;
    int d = 5;
    uint64_t n_chains = 50000;
    uint64_t seed = 0;
    SamplerConfig sampler;
    /// Physical error rate standing in for the p -> 0 limit.
    double p_eval = 1e-3;
};

struct FractionResult {
    uint64_t n = 0;
    uint64_t failures = 0;
    double fraction = 0.0;
    double sigma = 0.0;
};

/// Depolarizing weight-(d+1)/2 chains decoded by EWD at p_eval; fraction whose
/// class differs from the decision.
FractionResult run_weight_fraction(const WeightFractionConfig &config);
FractionResult run_weight_fraction_serial(const WeightFractionConfig &config);

/// Applies `decide` to every chain with exactly `weight` errors and returns the
/// fraction decided into the wrong class. Exhaustive; for small codes only.
FractionResult exhaustive_weight_fraction(
    const CodeLayout &layout, size_t weight,
    const std::function<ClassLabel(const Syndrome &, const PauliChain &)> &decide);

struct TimeToLightConfig {
    CodeKind code = CodeKind::XZZX;
    int d = 5;
    uint64_t n_instances = 1000;
    /// Attempts per class before an instance is flagged.
    uint64_t step_budget = 1000000;
    uint64_t seed = 0;
    double p_sample = 0.3;
    uint64_t record_stride = 5;
    /// Random generators applied per class to the seeded chain: factor * d^2.
    uint64_t scramble_factor = 100;
};

struct TimeToLightResult {
    /// Attempts per class until a weight-(d-1)/2 chain was recorded, for
    /// successful instances, in instance order.
    std::vector<uint64_t> steps;
    uint64_t n_instances = 0;
    uint64_t n_flagged = 0;
    /// Nearest-rank percentiles over all instances, flagged ones counted as
    /// +inf.
    double p50 = 0.0;
    double p95 = 0.0;
    /// Minimal recorded weight at termination for successful instances.
    std::vector<double> final_weights;
};

TimeToLightResult run_time_to_light(const TimeToLightConfig &config);

/// Nearest-rank percentile; `flagged` extra samples count as +inf.
double percentile(std::vector<uint64_t> values, uint64_t flagged, double q);

struct SweepRow {
    double p = 0.0;
    std::array<double, 4> ewd{};
    std::array<double, 4> all{};
};

/// Re-evaluates class probabilities from stored histograms at every grid rate.
/// Needs no random numbers.
std::vector<SweepRow> run_probability_sweep(const std::array<ClassHistogram, 4> &hists, double alpha_x,
                                            double alpha_y, const std::vector<double> &error_rates);

struct OracleCheckResult {
    uint64_t n = 0;
    uint64_t agreements = 0;
    double fraction = 0.0;
};

/// Samples n chains at the given noise and compares the EWD decision with the
/// exhaustive maximum-likelihood decision. Exact ties count as agreement for
/// any class in the tied set.
OracleCheckResult oracle_check(CodeKind code, int d, const NoiseParams &noise, uint64_t n, uint64_t seed,
                               const SamplerConfig &sampler);

/// Applies the worker count from EWD_THREADS if set.
void configure_workers_from_env();

}  // namespace ewd
