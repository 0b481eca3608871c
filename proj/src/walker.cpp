#include "ewd/walker.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ewd/noise.hpp"

namespace ewd {

double acceptance_probability(double beta, double alpha_x, double alpha_y, const PauliCounts &delta) {
    int forbidden = 0;
    double dw = delta.n_z;
    if (std::isinf(alpha_x)) {
        forbidden += delta.n_x;
    } else {
        dw += alpha_x * delta.n_x;
    }
    if (std::isinf(alpha_y)) {
        forbidden += delta.n_y;
    } else {
        dw += alpha_y * delta.n_y;
    }
    if (forbidden != 0) {
        return forbidden < 0 ? 1.0 : 0.0;
    }
    if (dw <= 0.0 || beta == 0.0) {
        return 1.0;
    }
    if (std::isinf(beta)) {
        return 0.0;
    }
    return std::min(1.0, std::exp(-beta * dw));
}

ChainWalker::ChainWalker(const CodeLayout &layout, double alpha_x, double alpha_y, double beta, PauliChain start)
    : layout_(&layout), alpha_x_(alpha_x), alpha_y_(alpha_y), beta_(beta), chain_(std::move(start)) {
    counts_ = count_paulis(chain_);
    weight_ = effective_weight(alpha_x_, alpha_y_, counts_);
    key_ = chain_key(chain_);
    set_beta(beta);
}

void ChainWalker::set_beta(double beta) {
    beta_ = beta;
    for (int dx = -4; dx <= 4; dx++) {
        for (int dy = -4; dy <= 4; dy++) {
            for (int dz = -4; dz <= 4; dz++) {
                PauliCounts d{dx, dy, dz};
                table_[table_index(d)] = acceptance_probability(beta_, alpha_x_, alpha_y_, d);
            }
        }
    }
}

bool ChainWalker::propose(const SparsePauli &op, Rng &rng) {
    PauliCounts d = chain_.delta_for(op);
    double a = acceptance_probability(beta_, alpha_x_, alpha_y_, d);
    if (a <= 0.0 || (a < 1.0 && !(a > uniform01(rng)))) {
        return false;
    }
    apply(op, d);
    return true;
}

void ChainWalker::apply(const SparsePauli &op, const PauliCounts &d) {
    chain_.apply(op);
    counts_ += d;
    weight_ = effective_weight(alpha_x_, alpha_y_, counts_);
    key_ ^= op.key;
}

void ChainWalker::swap_state(ChainWalker &other) {
    std::swap(chain_, other.chain_);
    std::swap(counts_, other.counts_);
    std::swap(weight_, other.weight_);
    std::swap(key_, other.key_);
}

}  // namespace ewd
