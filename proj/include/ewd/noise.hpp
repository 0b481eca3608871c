#pragma once

#include <cstddef>
#include <limits>

#include "ewd/pauli.hpp"
#include "ewd/random.hpp"

namespace ewd {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Single-qubit Pauli noise in the (p, alpha_x, alpha_y) parametrization.
///
/// With p_tilde_z = p_z / (1 - p), the relative rates satisfy
/// p_x / (1 - p) = p_tilde_z^alpha_x and p_y / (1 - p) = p_tilde_z^alpha_y, so a
/// chain has probability e^(-beta w) relative to the empty chain, with
/// beta = -ln(p_tilde_z) and w its effective weight.
struct NoiseParams {
    double p = 0.0;
    double alpha_x = 1.0;
    double alpha_y = 1.0;
    double p_x = 0.0;
    double p_y = 0.0;
    double p_z = 0.0;
    double p_tilde_z = 0.0;
    double beta = kInfinity;
};

/// Solves p/(1-p) = t + t^alpha_x + t^alpha_y for t = p_tilde_z by bisection
/// (relative tolerance 1e-12). alpha = +inf contributes nothing.
/// Throws std::domain_error for p outside [0, 1) or alpha < 1.
NoiseParams noise_from_alpha(double p, double alpha_x, double alpha_y);

/// Noise with p_x = p_y and bias eta = p_z / (p_x + p_y). eta = +inf gives pure
/// phase-flip noise.
NoiseParams noise_from_eta(double p, double eta);

/// alpha = (ln p_tilde_z - ln 2 eta) / ln p_tilde_z.
double alpha_from_eta(double p_tilde_z, double eta);

/// Exponent for "uncorrelated" noise where p is the independent X and Z flip
/// rate: [p/(1-p)]^alpha_y = [p/(1-p)]^2, i.e. alpha_y = 2. Domain 0 < p < 1/2.
double uncorrelated_alpha_y(double p);

/// w = n_z + alpha_x n_x + alpha_y n_y. Infinite alpha with a nonzero count
/// yields +inf.
double effective_weight(double alpha_x, double alpha_y, const PauliCounts &counts);
inline double effective_weight(const NoiseParams &noise, const PauliCounts &counts) {
    return effective_weight(noise.alpha_x, noise.alpha_y, counts);
}

/// i.i.d. single-qubit Pauli errors.
PauliChain sample_chain(const NoiseParams &noise, size_t n_qubits, Rng &rng);

/// Shannon entropy in bits of (1 - p, p_x, p_y, p_z).
double channel_entropy(const NoiseParams &noise);

/// Error rate at which the channel entropy reaches one bit, for
/// alpha_x = alpha_y = alpha. Bisection on p in (0, 1/2] to 1e-6.
double hashing_bound(double alpha);

}  // namespace ewd
