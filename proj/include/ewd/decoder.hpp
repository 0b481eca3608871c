#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ewd/codes.hpp"
#include "ewd/noise.hpp"
#include "ewd/random.hpp"

namespace ewd {

/// Raised when class probabilities are requested without any observed chains.
class NoDataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Weights within this distance of the minimum count as minimal.
inline constexpr double kWeightTolerance = 1e-9;

struct SamplerConfig {
    /// Error rate used for the Metropolis acceptance. Independent of the
    /// physical error rate; only the alphas are shared.
    double p_sample = 0.3;
    /// Proposal attempts per class; 0 selects 25 d^5.
    uint64_t steps = 0;
    /// The current chain is recorded at step 0 and every record_stride-th
    /// attempt, accepted or not.
    uint64_t record_stride = 5;
    uint64_t seed = 0;
    /// Explore all four classes even for a trivial syndrome.
    bool explore_trivial = false;
    /// Keep the full per-class histograms in the Decision.
    bool keep_histograms = true;
};

uint64_t default_steps(int distance);

/// Distinct observed chains of one class, binned by effective weight.
struct ClassHistogram {
    ClassLabel label = ClassLabel::I;
    std::map<double, uint64_t> entries;
    uint64_t total_unique = 0;

    bool empty() const { return entries.empty(); }
    void add(double w, uint64_t count = 1) {
        entries[w] += count;
        total_unique += count;
    }
};

/// Lightest observed weight of a class and its degeneracy.
struct OctetEntry {
    double w_star = kInfinity;
    uint64_t n_star = 0;

    bool explored() const { return n_star > 0; }
    bool operator==(const OctetEntry &) const = default;
};

using Octet = std::array<OctetEntry, 4>;

/// Minimum weight of a histogram and the number of chains within
/// kWeightTolerance of it. Empty histogram gives an unexplored entry.
OctetEntry lightest(const ClassHistogram &h);
Octet octet_of(const std::array<ClassHistogram, 4> &hists);

enum class ProbabilityMode { EWD, All };

struct Decision {
    ClassLabel chosen = ClassLabel::I;
    std::array<double, 4> probabilities{1.0, 0.0, 0.0, 0.0};
    Octet octet{};
    std::optional<std::array<ClassHistogram, 4>> histograms;
    std::array<double, 4> dominance{1.0, 1.0, 1.0, 1.0};
    /// Trivial syndrome answered without exploration.
    bool fast_path = false;
};

/// Argmax with ties broken by the fixed priority I > Z > X > Y.
ClassLabel choose_class(const std::array<double, 4> &probabilities);

/// P_E proportional to N*_E e^(-beta w*_E), evaluated in log space. beta = +inf
/// takes the low-error-rate limit: only classes at the global minimum weight
/// carry mass, split by degeneracy.
std::array<double, 4> class_probabilities(const Octet &octet, double beta);

/// EWD mode uses only the lightest bin of each class; All mode sums every
/// observed bin.
std::array<double, 4> class_probabilities(const std::array<ClassHistogram, 4> &hists, double beta,
                                          ProbabilityMode mode);

/// The class picked as the error rate goes to zero: smallest w*, then largest
/// N*, then the I > Z > X > Y priority.
ClassLabel limit_choice(const Octet &octet);

/// Fraction of the observed class mass carried by its lightest chains.
double dominance_diagnostic(const ClassHistogram &h, double beta);

/// Metropolis exploration of one class starting from `start`, at the error rate
/// of `sample_noise`. Every record_stride-th state is stored by content key
/// (first write wins) and the unique chains are returned binned by weight.
/// When `recorded` is non-null every newly stored chain is appended to it.
ClassHistogram metropolis_explore(const CodeLayout &layout, const NoiseParams &sample_noise,
                                  const SamplerConfig &config, const PauliChain &start, Rng &rng,
                                  std::vector<PauliChain> *recorded = nullptr);

/// Full EWD decode of one syndrome. Each class is seeded from
/// derive_seed(config.seed, {class index}), so the result does not depend on
/// the order in which classes are explored.
Decision decode(const CodeLayout &layout, const Syndrome &s, const NoiseParams &physical,
                const SamplerConfig &config, ProbabilityMode mode = ProbabilityMode::EWD);

}  // namespace ewd
