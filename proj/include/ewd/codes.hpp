#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ewd/pauli.hpp"
#include "ewd/random.hpp"

namespace ewd {

enum class CodeKind { RotatedSurface, XZZX };

std::string code_name(CodeKind kind);
/// Accepts "rotated", "rotated-surface", "surface", "xzzx" (case-insensitive).
CodeKind parse_code_kind(std::string_view text);

/// Equivalence class label. Two-bit Klein four-group encoding: bit 0 set when
/// the chain anticommutes with logical Z, bit 1 set when it anticommutes with
/// logical X. Composition of chains is XOR of labels.
enum class ClassLabel : uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline constexpr std::array<ClassLabel, 4> kAllClasses = {ClassLabel::I, ClassLabel::X, ClassLabel::Z, ClassLabel::Y};

inline ClassLabel operator*(ClassLabel a, ClassLabel b) {
    return static_cast<ClassLabel>(static_cast<uint8_t>(a) ^ static_cast<uint8_t>(b));
}
inline size_t class_index(ClassLabel c) { return static_cast<size_t>(c); }
char class_char(ClassLabel c);
ClassLabel parse_class(char c);

struct Syndrome {
    std::vector<uint8_t> bits;

    size_t size() const { return bits.size(); }
    bool is_trivial() const;
    size_t weight() const;
    std::string str() const;
    static Syndrome from_string(std::string_view text);

    Syndrome &operator^=(const Syndrome &o);
    bool operator==(const Syndrome &) const = default;
};

/// One parity term of a class readout: the chain's `component` bit on `qubit`.
struct ReadoutTerm {
    uint32_t qubit;
    Pauli component;  // X or Z
};

/// Geometry and stabilizer structure of a distance-d code on a d x d grid.
///
/// Qubit (row, col) has index row * d + col. Plaquette (r, c), r, c in
/// [-1, d-1], has corners (r, c), (r, c+1), (r+1, c), (r+1, c+1) clipped to the
/// grid. Generators are listed in row-major plaquette order.
class CodeLayout {
  public:
    CodeKind kind() const { return kind_; }
    int distance() const { return distance_; }
    size_t n_qubits() const { return static_cast<size_t>(distance_) * distance_; }
    size_t n_stabilizers() const { return stabilizers_.size(); }

    const std::vector<PauliChain> &stabilizers() const { return stabilizers_; }
    const std::vector<SparsePauli> &sparse_stabilizers() const { return sparse_stabilizers_; }
    const PauliChain &logical_x() const { return logical_x_; }
    const PauliChain &logical_z() const { return logical_z_; }
    const SparsePauli &sparse_logical(ClassLabel c) const { return sparse_logicals_[class_index(c)]; }
    const PauliChain &logical(ClassLabel c) const { return logicals_[class_index(c)]; }
    /// Parity terms deciding anticommutation with logical_x (index 0) and
    /// logical_z (index 1).
    const std::array<std::vector<ReadoutTerm>, 2> &class_readout() const { return readout_; }
    /// Chain with unit syndrome on generator i.
    const PauliChain &pure_error(size_t i) const { return pure_errors_[i]; }
    /// Plaquette coordinates of generator i.
    std::pair<int, int> plaquette(size_t i) const { return plaquettes_[i]; }

  private:
    friend CodeLayout build_code(CodeKind kind, int d);

    CodeKind kind_ = CodeKind::RotatedSurface;
    int distance_ = 0;
    std::vector<PauliChain> stabilizers_;
    std::vector<SparsePauli> sparse_stabilizers_;
    std::vector<std::pair<int, int>> plaquettes_;
    PauliChain logical_x_;
    PauliChain logical_z_;
    std::array<PauliChain, 4> logicals_;
    std::array<SparsePauli, 4> sparse_logicals_;
    std::array<std::vector<ReadoutTerm>, 2> readout_;
    std::vector<PauliChain> pure_errors_;
};

/// Throws std::invalid_argument unless d is odd and >= 3.
CodeLayout build_code(CodeKind kind, int d);

Syndrome compute_syndrome(const CodeLayout &layout, const PauliChain &c);

/// compose(c, stabilizer[index]); throws std::out_of_range on a bad index.
PauliChain apply_stabilizer(const CodeLayout &layout, const PauliChain &c, size_t index);

ClassLabel logical_class(const CodeLayout &layout, const PauliChain &c);

/// Deterministic chain of class `target` consistent with `s`: product of pure
/// errors, class fixed with a logical representative.
PauliChain representative_chain(const CodeLayout &layout, const Syndrome &s, ClassLabel target);

/// Randomized chain with syndrome `s` in class `target`: product of pure
/// errors, class fixed with a logical representative, then 10*d^2 uniformly
/// random generator applications.
PauliChain initial_chain(const CodeLayout &layout, const Syndrome &s, ClassLabel target, Rng &rng);

/// Applies `count` uniformly random generators to `c` in place.
void scramble(const CodeLayout &layout, PauliChain &c, size_t count, Rng &rng);

/// Text dump of a layout: one line per generator and the two logicals.
std::string describe(const CodeLayout &layout);

}  // namespace ewd
