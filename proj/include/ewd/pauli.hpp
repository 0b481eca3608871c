#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ewd {

/// Single-qubit Pauli in two-bit form: bit 0 is the X component, bit 1 the Z
/// component. I=0, X=1, Z=2, Y=3.
enum class Pauli : uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline Pauli operator*(Pauli a, Pauli b) {
    return static_cast<Pauli>(static_cast<uint8_t>(a) ^ static_cast<uint8_t>(b));
}

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

struct PauliCounts {
    int n_x = 0;
    int n_y = 0;
    int n_z = 0;

    int total() const { return n_x + n_y + n_z; }
    bool operator==(const PauliCounts &) const = default;
    PauliCounts &operator+=(const PauliCounts &o) {
        n_x += o.n_x;
        n_y += o.n_y;
        n_z += o.n_z;
        return *this;
    }
};

/// 128-bit content key of a chain.
struct ChainKey {
    uint64_t lo = 0;
    uint64_t hi = 0;

    bool operator==(const ChainKey &) const = default;
    ChainKey &operator^=(const ChainKey &o) {
        lo ^= o.lo;
        hi ^= o.hi;
        return *this;
    }
    friend ChainKey operator^(ChainKey a, const ChainKey &b) { return a ^= b; }

    template <typename H>
    friend H AbslHashValue(H h, const ChainKey &k) {
        return H::combine(std::move(h), k.lo, k.hi);
    }
};

struct ChainKeyHash {
    size_t operator()(const ChainKey &k) const noexcept { return static_cast<size_t>(k.lo ^ (k.hi * 0x9E3779B97F4A7C15ull)); }
};

/// Sparse Pauli operator: a short list of (qubit, Pauli) terms. Used for
/// stabilizer generators and logical representatives in the hot loops.
struct SparsePauli {
    std::vector<std::pair<uint32_t, Pauli>> terms;
    ChainKey key;
};

/// N-qubit Pauli operator, phase dropped, stored as an X bitplane and a Z
/// bitplane packed little-endian into 64-bit words (qubit q is bit q % 64 of
/// word q / 64).
class PauliChain {
  public:
    PauliChain() = default;
    explicit PauliChain(size_t n_qubits);

    static PauliChain identity(size_t n_qubits) { return PauliChain(n_qubits); }
    /// Parses a string over {I,X,Y,Z} (also accepts '_' for I).
    static PauliChain from_string(std::string_view text);

    size_t n_qubits() const { return n_qubits_; }
    size_t num_words() const { return xs_.size(); }
    const std::vector<uint64_t> &x_words() const { return xs_; }
    const std::vector<uint64_t> &z_words() const { return zs_; }

    Pauli get(size_t q) const {
        uint8_t x = (xs_[q >> 6] >> (q & 63)) & 1;
        uint8_t z = (zs_[q >> 6] >> (q & 63)) & 1;
        return static_cast<Pauli>(x | (z << 1));
    }
    void set(size_t q, Pauli p);
    /// Multiplies qubit q by p (phase dropped).
    void mul(size_t q, Pauli p) {
        uint64_t bit = uint64_t{1} << (q & 63);
        if (static_cast<uint8_t>(p) & 1) {
            xs_[q >> 6] ^= bit;
        }
        if (static_cast<uint8_t>(p) & 2) {
            zs_[q >> 6] ^= bit;
        }
    }

    bool is_identity() const;
    std::string str() const;

    /// In-place composition with another chain of the same size.
    PauliChain &operator*=(const PauliChain &other);
    void apply(const SparsePauli &op) {
        for (const auto &[q, p] : op.terms) {
            mul(q, p);
        }
    }
    /// Change in Pauli counts if `op` were applied.
    PauliCounts delta_for(const SparsePauli &op) const;

    bool operator==(const PauliChain &) const = default;

  private:
    size_t n_qubits_ = 0;
    std::vector<uint64_t> xs_;
    std::vector<uint64_t> zs_;
};

/// Product of two chains: XOR of bitplanes. Throws std::invalid_argument on a
/// size mismatch.
PauliChain compose(const PauliChain &a, const PauliChain &b);

PauliCounts count_paulis(const PauliChain &c);

/// 1 if the chains anticommute, 0 otherwise.
int symplectic_product(const PauliChain &a, const PauliChain &b);

/// Content key of a chain.
///
/// The key is the XOR over all set bits of a fixed table of 128-bit words:
/// X-plane bit q contributes table[2q], Z-plane bit q contributes
/// table[2q + 1], where table[j] = (splitmix64(2j), splitmix64(2j + 1)) and
/// splitmix64(k) is the SplitMix64 output for state 0x5eed'c0de'ca11'ab1e +
/// (k + 1) * 0x9E3779B97F4A7C15. The map is GF(2)-linear, so
/// chain_key(compose(a, b)) == chain_key(a) ^ chain_key(b), and the identity
/// chain has key zero.
ChainKey chain_key(const PauliChain &c);

/// Key contribution of Pauli p on qubit q.
ChainKey qubit_key(size_t q, Pauli p);

SparsePauli to_sparse(const PauliChain &c);

}  // namespace ewd
