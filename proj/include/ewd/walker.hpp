#pragma once

#include <array>

#include "ewd/codes.hpp"
#include "ewd/pauli.hpp"
#include "ewd/random.hpp"

namespace ewd {

/// Metropolis acceptance probability of a move changing the Pauli counts by
/// `delta`, at inverse temperature beta: min(1, e^(-beta dw)).
///
/// Infinite alphas are handled as the limit of large finite ones: a move that
/// removes infinite-weight errors is always accepted, one that adds them is
/// always rejected, and otherwise the finite part of dw decides.
double acceptance_probability(double beta, double alpha_x, double alpha_y, const PauliCounts &delta);

/// A single error chain under Metropolis dynamics with random stabilizer
/// proposals. Tracks counts, effective weight and content key incrementally.
class ChainWalker {
  public:
    ChainWalker(const CodeLayout &layout, double alpha_x, double alpha_y, double beta, PauliChain start);

    /// One proposal with a uniformly random generator. Returns true if accepted.
    bool step(Rng &rng) {
        const auto &gens = layout_->sparse_stabilizers();
        const SparsePauli &g = gens[uniform_index(rng, gens.size())];
        int idx = kCenter;
        for (const auto &[q, p] : g.terms) {
            idx += kShift[static_cast<uint8_t>(chain_.get(q))][static_cast<uint8_t>(p)];
        }
        double a = table_[static_cast<size_t>(idx)];
        if (a <= 0.0 || (a < 1.0 && !(a > uniform01(rng)))) {
            return false;
        }
        apply(g, PauliCounts{idx / 81 - 4, idx / 9 % 9 - 4, idx % 9 - 4});
        return true;
    }

    /// Proposal with an arbitrary operator; acceptance computed directly.
    bool propose(const SparsePauli &op, Rng &rng);

    /// Unconditionally applies an operator.
    void force(const SparsePauli &op) { apply(op, chain_.delta_for(op)); }

    void set_beta(double beta);
    double beta() const { return beta_; }

    const PauliChain &chain() const { return chain_; }
    const PauliCounts &counts() const { return counts_; }
    double weight() const { return weight_; }
    const ChainKey &key() const { return key_; }

    /// Exchanges chain state (not temperature) with another walker.
    void swap_state(ChainWalker &other);

  private:
    // Table index offset of a single-site change: 81 per X, 9 per Y, 1 per Z.
    static constexpr int kUnit[4] = {0, 81, 1, 9};
    static constexpr int kCenter = 4 * 81 + 4 * 9 + 4;
    static constexpr auto kShift = [] {
        std::array<std::array<int, 4>, 4> t{};
        for (int before = 0; before < 4; before++) {
            for (int p = 0; p < 4; p++) {
                t[before][p] = kUnit[before ^ p] - kUnit[before];
            }
        }
        return t;
    }();

    static size_t table_index(const PauliCounts &d) {
        return static_cast<size_t>((d.n_x + 4) * 81 + (d.n_y + 4) * 9 + (d.n_z + 4));
    }
    void apply(const SparsePauli &op, const PauliCounts &d);

    const CodeLayout *layout_;
    double alpha_x_;
    double alpha_y_;
    double beta_;
    // Acceptance for every count change a weight <= 4 generator can produce.
    std::array<double, 729> table_{};
    PauliChain chain_;
    PauliCounts counts_;
    double weight_ = 0.0;
    ChainKey key_;
};

}  // namespace ewd
