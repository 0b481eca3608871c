#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ewd/codes.hpp"
#include "ewd/decoder.hpp"
#include "ewd/noise.hpp"

namespace ewd {

/// Raised when exhaustive enumeration is requested for a code that is too large.
class CapacityError : public std::length_error {
  public:
    using std::length_error::length_error;
};

/// Largest generator count exact enumeration accepts (d = 5 has 24).
inline constexpr size_t kMaxEnumeratedGenerators = 24;

/// Number of chains of a class for every (n_x, n_y, n_z), flattened as
/// ((n_x * (N+1)) + n_y) * (N+1) + n_z. Independent of the noise parameters.
struct CountTable {
    size_t n_qubits = 0;
    std::vector<uint64_t> counts;

    explicit CountTable(size_t n = 0) : n_qubits(n), counts((n + 1) * (n + 1) * (n + 1), 0) {}
    size_t index(const PauliCounts &c) const {
        return (static_cast<size_t>(c.n_x) * (n_qubits + 1) + static_cast<size_t>(c.n_y)) * (n_qubits + 1) +
               static_cast<size_t>(c.n_z);
    }
    uint64_t total() const;
    CountTable &operator+=(const CountTable &o);
    bool operator==(const CountTable &) const = default;
    /// Bins the table by effective weight.
    ClassHistogram histogram(ClassLabel label, double alpha_x, double alpha_y) const;
};

/// Per-class count tables for one syndrome.
struct ExactCounts {
    std::array<CountTable, 4> classes;
    bool operator==(const ExactCounts &) const = default;
};

/// Walks the 2^(d^2-1) stabilizer-group elements of every class in Gray-code
/// order. The parallel version splits each class into contiguous Gray-code
/// blocks distributed over OpenMP threads; the serial version is the
/// reference it is tested against. Throws CapacityError above d = 5.
ExactCounts exact_class_counts(const CodeLayout &layout, const Syndrome &s);
ExactCounts exact_class_counts_serial(const CodeLayout &layout, const Syndrome &s);

struct ExactResult {
    std::array<double, 4> probabilities{};
    std::array<ClassHistogram, 4> histograms;
    ClassLabel chosen = ClassLabel::I;
};

/// Exact class probabilities from complete enumeration counts.
ExactResult exact_from_counts(const ExactCounts &counts, const NoiseParams &noise);

/// Exhaustive maximum-likelihood decode.
ExactResult exact_mld(const CodeLayout &layout, const Syndrome &s, const NoiseParams &noise);

/// Failure rate of maximum-likelihood decoding of the XZZX code under pure
/// phase-flip noise: sum_{w=(d+1)/2}^{d} C(d, w) p^w (1-p)^(d-w).
/// Requires odd d and 0 <= p <= 1/2.
double pure_z_failure_rate(int d, double p);

struct PTConfig {
    int n_layers = 7;
    /// Metropolis attempts per layer per sweep; 0 selects d^2.
    uint64_t steps_per_sweep = 0;
    uint64_t total_sweeps = 2000;
    uint64_t seed = 0;
    /// Leading fraction of sweeps discarded before counting classes.
    double burn_in_fraction = 0.1;
};

/// Inverse temperatures of the tempering ladder, bottom (physical) first,
/// geometric in p_tilde_z from the physical value to 1 at the top.
std::vector<double> layer_betas(double beta_physical, int n_layers);

/// Acceptance of exchanging chains between two layers:
/// min(1, pi_a(b') pi_b(a') / (pi_a(a') pi_b(b'))) with pi = e^(-beta w), which
/// reduces to min(1, e^((beta_a - beta_b)(w_a - w_b))).
double swap_acceptance(double beta_a, double beta_b, double w_a, double w_b);

/// Parallel-tempering MCMC decoder. Class probabilities are the fraction of
/// post-burn-in sweeps whose bottom-layer chain lies in each class.
/// Throws std::domain_error for infinite alphas or p = 0.
Decision mcmc_pt_decode(const CodeLayout &layout, const Syndrome &s, const NoiseParams &noise,
                        const PTConfig &config);

}  // namespace ewd
