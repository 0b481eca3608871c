#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ewd/baselines.hpp"
#include "ewd/walker.hpp"

namespace ewd {

std::vector<double> layer_betas(double beta_physical, int n_layers) {
    if (n_layers < 2) {
        throw std::invalid_argument("parallel tempering needs at least two layers");
    }
    std::vector<double> betas(static_cast<size_t>(n_layers));
    for (int k = 0; k < n_layers; k++) {
        double f = 1.0 - static_cast<double>(k) / (n_layers - 1);
        // p_tilde_z^f is geometric in p_tilde_z; f = 0 is the flat top layer.
        betas[static_cast<size_t>(k)] = f == 0.0 ? 0.0 : beta_physical * f;
    }
    return betas;
}

double swap_acceptance(double beta_a, double beta_b, double w_a, double w_b) {
    if (beta_a == beta_b || w_a == w_b) {
        return 1.0;
    }
    return std::min(1.0, std::exp((beta_a - beta_b) * (w_a - w_b)));
}

Decision mcmc_pt_decode(const CodeLayout &layout, const Syndrome &s, const NoiseParams &noise,
                        const PTConfig &config) {
    if (std::isinf(noise.alpha_x) || std::isinf(noise.alpha_y)) {
        throw std::domain_error("parallel tempering needs finite alphas");
    }
    if (!std::isfinite(noise.beta)) {
        throw std::domain_error("parallel tempering needs p > 0");
    }
    Rng rng(derive_seed(config.seed, {0x7e3}));
    std::vector<double> betas = layer_betas(noise.beta, config.n_layers);
    size_t layers = betas.size();
    uint64_t steps = config.steps_per_sweep ? config.steps_per_sweep : layout.n_qubits();

    std::vector<ChainWalker> walkers;
    std::vector<ClassLabel> labels;
    walkers.reserve(layers);
    for (size_t k = 0; k < layers; k++) {
        auto start_class = static_cast<ClassLabel>(uniform_index(rng, 4));
        walkers.emplace_back(layout, noise.alpha_x, noise.alpha_y, betas[k], initial_chain(layout, s, start_class, rng));
        labels.push_back(start_class);
    }

    uint64_t burn_in = static_cast<uint64_t>(config.burn_in_fraction * static_cast<double>(config.total_sweeps));
    std::array<uint64_t, 4> visits{};
    uint64_t samples = 0;
    for (uint64_t sweep = 0; sweep < config.total_sweeps; sweep++) {
        for (size_t k = 0; k < layers; k++) {
            bool top = k + 1 == layers;
            for (uint64_t t = 0; t < steps; t++) {
                // Logical moves only where they are always accepted.
                if (top && uniform01(rng) < 0.5) {
                    auto logical = static_cast<ClassLabel>(1 + uniform_index(rng, 3));
                    if (walkers[k].propose(layout.sparse_logical(logical), rng)) {
                        labels[k] = labels[k] * logical;
                    }
                } else {
                    walkers[k].step(rng);
                }
            }
        }
        for (size_t k = 0; k + 1 < layers; k++) {
            double a = swap_acceptance(walkers[k].beta(), walkers[k + 1].beta(), walkers[k].weight(),
                                       walkers[k + 1].weight());
            if (a >= 1.0 || a > uniform01(rng)) {
                walkers[k].swap_state(walkers[k + 1]);
                std::swap(labels[k], labels[k + 1]);
            }
        }
        if (sweep >= burn_in) {
            visits[class_index(labels[0])]++;
            samples++;
        }
    }

    Decision out;
    for (size_t k = 0; k < 4; k++) {
        out.probabilities[k] = samples ? static_cast<double>(visits[k]) / static_cast<double>(samples) : 0.25;
    }
    out.chosen = choose_class(out.probabilities);
    return out;
}

}  // namespace ewd
