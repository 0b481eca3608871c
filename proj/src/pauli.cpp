#include "ewd/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace ewd {

namespace {

constexpr uint64_t kKeySeed = 0x5eedc0deca11ab1eull;
constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;

uint64_t splitmix_at(uint64_t k) {
    uint64_t z = kKeySeed + (k + 1) * kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

ChainKey table_entry(size_t j) {
    return ChainKey{splitmix_at(2 * j), splitmix_at(2 * j + 1)};
}

size_t words_for(size_t n) { return (n + 63) / 64; }

}  // namespace

char pauli_char(Pauli p) {
    static constexpr char kChars[] = {'I', 'X', 'Z', 'Y'};
    return kChars[static_cast<uint8_t>(p)];
}

Pauli pauli_from_char(char c) {
    switch (c) {
        case 'I':
        case '_':
            return Pauli::I;
        case 'X':
            return Pauli::X;
        case 'Y':
            return Pauli::Y;
        case 'Z':
            return Pauli::Z;
        default:
            throw std::invalid_argument(std::string("not a Pauli character: '") + c + "'");
    }
}

PauliChain::PauliChain(size_t n_qubits)
    : n_qubits_(n_qubits), xs_(words_for(n_qubits), 0), zs_(words_for(n_qubits), 0) {}

PauliChain PauliChain::from_string(std::string_view text) {
    PauliChain c(text.size());
    for (size_t q = 0; q < text.size(); q++) {
        c.set(q, pauli_from_char(text[q]));
    }
    return c;
}

void PauliChain::set(size_t q, Pauli p) {
    uint64_t bit = uint64_t{1} << (q & 63);
    auto &xw = xs_[q >> 6];
    auto &zw = zs_[q >> 6];
    xw = (static_cast<uint8_t>(p) & 1) ? (xw | bit) : (xw & ~bit);
    zw = (static_cast<uint8_t>(p) & 2) ? (zw | bit) : (zw & ~bit);
}

bool PauliChain::is_identity() const {
    for (size_t k = 0; k < xs_.size(); k++) {
        if (xs_[k] | zs_[k]) {
            return false;
        }
    }
    return true;
}

std::string PauliChain::str() const {
    std::string out(n_qubits_, 'I');
    for (size_t q = 0; q < n_qubits_; q++) {
        out[q] = pauli_char(get(q));
    }
    return out;
}

PauliChain &PauliChain::operator*=(const PauliChain &other) {
    if (other.n_qubits_ != n_qubits_) {
        throw std::invalid_argument("chain size mismatch: " + std::to_string(n_qubits_) + " vs " +
                                    std::to_string(other.n_qubits_));
    }
    for (size_t k = 0; k < xs_.size(); k++) {
        xs_[k] ^= other.xs_[k];
        zs_[k] ^= other.zs_[k];
    }
    return *this;
}

PauliCounts PauliChain::delta_for(const SparsePauli &op) const {
    PauliCounts d;
    for (const auto &[q, p] : op.terms) {
        Pauli before = get(q);
        Pauli after = before * p;
        switch (before) {
            case Pauli::X: d.n_x--; break;
            case Pauli::Y: d.n_y--; break;
            case Pauli::Z: d.n_z--; break;
            case Pauli::I: break;
        }
        switch (after) {
            case Pauli::X: d.n_x++; break;
            case Pauli::Y: d.n_y++; break;
            case Pauli::Z: d.n_z++; break;
            case Pauli::I: break;
        }
    }
    return d;
}

PauliChain compose(const PauliChain &a, const PauliChain &b) {
    PauliChain out = a;
    out *= b;
    return out;
}

PauliCounts count_paulis(const PauliChain &c) {
    PauliCounts out;
    const auto &xs = c.x_words();
    const auto &zs = c.z_words();
    for (size_t k = 0; k < xs.size(); k++) {
        out.n_x += std::popcount(xs[k] & ~zs[k]);
        out.n_y += std::popcount(xs[k] & zs[k]);
        out.n_z += std::popcount(zs[k] & ~xs[k]);
    }
    return out;
}

int symplectic_product(const PauliChain &a, const PauliChain &b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw std::invalid_argument("chain size mismatch in symplectic product");
    }
    uint64_t acc = 0;
    for (size_t k = 0; k < a.num_words(); k++) {
        acc ^= (a.x_words()[k] & b.z_words()[k]) ^ (a.z_words()[k] & b.x_words()[k]);
    }
    return std::popcount(acc) & 1;
}

ChainKey qubit_key(size_t q, Pauli p) {
    ChainKey k;
    if (static_cast<uint8_t>(p) & 1) {
        k ^= table_entry(2 * q);
    }
    if (static_cast<uint8_t>(p) & 2) {
        k ^= table_entry(2 * q + 1);
    }
    return k;
}

ChainKey chain_key(const PauliChain &c) {
    ChainKey k;
    for (size_t w = 0; w < c.num_words(); w++) {
        for (uint64_t bits = c.x_words()[w]; bits; bits &= bits - 1) {
            k ^= table_entry(2 * (w * 64 + std::countr_zero(bits)));
        }
        for (uint64_t bits = c.z_words()[w]; bits; bits &= bits - 1) {
            k ^= table_entry(2 * (w * 64 + std::countr_zero(bits)) + 1);
        }
    }
    return k;
}

SparsePauli to_sparse(const PauliChain &c) {
    SparsePauli s;
    for (size_t q = 0; q < c.n_qubits(); q++) {
        Pauli p = c.get(q);
        if (p != Pauli::I) {
            s.terms.emplace_back(static_cast<uint32_t>(q), p);
        }
    }
    s.key = chain_key(c);
    return s;
}

}  // namespace ewd
