#include "ewd/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ewd {

namespace {

double power_or_zero(double t, double alpha) { return std::isinf(alpha) ? 0.0 : std::pow(t, alpha); }

void check_alpha(double alpha) {
    if (std::isnan(alpha) || alpha < 1.0) {
        throw std::domain_error("alpha must be >= 1 (or inf), got " + std::to_string(alpha));
    }
}

}  // namespace

NoiseParams noise_from_alpha(double p, double alpha_x, double alpha_y) {
    if (!(p >= 0.0 && p < 1.0)) {
        throw std::domain_error("error rate must lie in [0, 1), got " + std::to_string(p));
    }
    check_alpha(alpha_x);
    check_alpha(alpha_y);
    NoiseParams n;
    n.p = p;
    n.alpha_x = alpha_x;
    n.alpha_y = alpha_y;
    if (p == 0.0) {
        return n;
    }
    double p_tilde = p / (1.0 - p);
    auto f = [&](double t) { return t + power_or_zero(t, alpha_x) + power_or_zero(t, alpha_y) - p_tilde; };
    double lo = 0.0;
    double hi = p_tilde;
    for (int it = 0; it < 400 && hi - lo > 1e-12 * hi; it++) {
        double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    double t = 0.5 * (lo + hi);
    n.p_tilde_z = t;
    n.p_z = t * (1.0 - p);
    n.p_x = power_or_zero(t, alpha_x) * (1.0 - p);
    n.p_y = power_or_zero(t, alpha_y) * (1.0 - p);
    n.beta = -std::log(t);
    return n;
}

NoiseParams noise_from_eta(double p, double eta) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("error rate must lie in (0, 1) for an eta bias, got " + std::to_string(p));
    }
    if (!(eta >= 0.5)) {
        throw std::domain_error("eta must be >= 1/2, got " + std::to_string(eta));
    }
    double p_z = std::isinf(eta) ? p : p * eta / (eta + 1.0);
    double alpha = alpha_from_eta(p_z / (1.0 - p), eta);
    return noise_from_alpha(p, alpha, alpha);
}

double alpha_from_eta(double p_tilde_z, double eta) {
    if (!(p_tilde_z > 0.0 && p_tilde_z < 1.0)) {
        throw std::domain_error("p_tilde_z must lie in (0, 1), got " + std::to_string(p_tilde_z));
    }
    if (!(eta >= 0.5)) {
        throw std::domain_error("eta must be >= 1/2, got " + std::to_string(eta));
    }
    if (std::isinf(eta)) {
        return kInfinity;
    }
    double lz = std::log(p_tilde_z);
    return (lz - std::log(2.0 * eta)) / lz;
}

double uncorrelated_alpha_y(double p) {
    if (!(p > 0.0 && p < 0.5)) {
        throw std::domain_error("uncorrelated noise needs 0 < p < 1/2, got " + std::to_string(p));
    }
    // [p(1-p)/(1-p)^2]^a = p^2/(1-p)^2  =>  a ln(p/(1-p)) = 2 ln(p/(1-p)).
    double l = std::log(p / (1.0 - p));
    return (2.0 * l) / l;
}

double effective_weight(double alpha_x, double alpha_y, const PauliCounts &counts) {
    double w = counts.n_z;
    if (counts.n_x) {
        w += alpha_x * counts.n_x;
    }
    if (counts.n_y) {
        w += alpha_y * counts.n_y;
    }
    return w;
}

PauliChain sample_chain(const NoiseParams &noise, size_t n_qubits, Rng &rng) {
    PauliChain c(n_qubits);
    if (noise.p == 0.0) {
        return c;
    }
    double cx = noise.p_x;
    double cy = cx + noise.p_y;
    double cz = cy + noise.p_z;
    for (size_t q = 0; q < n_qubits; q++) {
        double u = uniform01(rng);
        if (u < cx) {
            c.set(q, Pauli::X);
        } else if (u < cy) {
            c.set(q, Pauli::Y);
        } else if (u < cz) {
            c.set(q, Pauli::Z);
        }
    }
    return c;
}

double channel_entropy(const NoiseParams &noise) {
    double h = 0.0;
    for (double q : {1.0 - noise.p, noise.p_x, noise.p_y, noise.p_z}) {
        if (q > 0.0) {
            h -= q * std::log2(q);
        }
    }
    return h;
}

double hashing_bound(double alpha) {
    check_alpha(alpha);
    double lo = 0.0;
    double hi = 0.5;
    while (hi - lo > 1e-7) {
        double mid = 0.5 * (lo + hi);
        (channel_entropy(noise_from_alpha(mid, alpha, alpha)) < 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace ewd
