#include "ewd/codes.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace ewd {

std::string code_name(CodeKind kind) { return kind == CodeKind::XZZX ? "xzzx" : "rotated"; }

CodeKind parse_code_kind(std::string_view text) {
    std::string t(text);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (t == "xzzx") {
        return CodeKind::XZZX;
    }
    if (t == "rotated" || t == "rotated-surface" || t == "rotatedsurface" || t == "surface") {
        return CodeKind::RotatedSurface;
    }
    throw std::invalid_argument("unknown code kind: " + t);
}

char class_char(ClassLabel c) {
    static constexpr char kChars[] = {'I', 'X', 'Z', 'Y'};
    return kChars[class_index(c)];
}

ClassLabel parse_class(char c) {
    switch (c) {
        case 'I': return ClassLabel::I;
        case 'X': return ClassLabel::X;
        case 'Z': return ClassLabel::Z;
        case 'Y': return ClassLabel::Y;
        default: throw std::invalid_argument(std::string("not a class label: ") + c);
    }
}

bool Syndrome::is_trivial() const {
    return std::all_of(bits.begin(), bits.end(), [](uint8_t b) { return b == 0; });
}

size_t Syndrome::weight() const { return static_cast<size_t>(std::count(bits.begin(), bits.end(), uint8_t{1})); }

std::string Syndrome::str() const {
    std::string out(bits.size(), '0');
    for (size_t i = 0; i < bits.size(); i++) {
        out[i] = bits[i] ? '1' : '0';
    }
    return out;
}

Syndrome Syndrome::from_string(std::string_view text) {
    Syndrome s;
    s.bits.reserve(text.size());
    for (char ch : text) {
        if (ch != '0' && ch != '1') {
            throw std::invalid_argument("syndrome text must be over {0,1}");
        }
        s.bits.push_back(ch == '1');
    }
    return s;
}

Syndrome &Syndrome::operator^=(const Syndrome &o) {
    if (o.bits.size() != bits.size()) {
        throw std::invalid_argument("syndrome size mismatch");
    }
    for (size_t i = 0; i < bits.size(); i++) {
        bits[i] ^= o.bits[i];
    }
    return *this;
}

namespace {

// Syndrome rows for the elimination, packed into words.
struct Row {
    std::vector<uint64_t> syn;
    PauliChain chain;

    bool empty() const {
        return std::all_of(syn.begin(), syn.end(), [](uint64_t w) { return w == 0; });
    }
    size_t lowest() const {
        for (size_t k = 0; k < syn.size(); k++) {
            if (syn[k]) {
                return k * 64 + std::countr_zero(syn[k]);
            }
        }
        return SIZE_MAX;
    }
    bool test(size_t b) const { return (syn[b >> 6] >> (b & 63)) & 1; }
    Row &operator^=(const Row &o) {
        for (size_t k = 0; k < syn.size(); k++) {
            syn[k] ^= o.syn[k];
        }
        chain *= o.chain;
        return *this;
    }
};

// Unit-syndrome chains for every generator, by GF(2) elimination over the
// syndromes of single-qubit X and Z errors.
std::vector<PauliChain> solve_pure_errors(const CodeLayout &layout) {
    size_t m = layout.n_stabilizers();
    size_t n = layout.n_qubits();
    size_t words = (m + 63) / 64;
    std::vector<std::optional<Row>> pivots(m);
    for (size_t q = 0; q < n; q++) {
        for (Pauli p : {Pauli::X, Pauli::Z}) {
            Row r{std::vector<uint64_t>(words, 0), PauliChain(n)};
            r.chain.set(q, p);
            Syndrome s = compute_syndrome(layout, r.chain);
            for (size_t i = 0; i < m; i++) {
                if (s.bits[i]) {
                    r.syn[i >> 6] |= uint64_t{1} << (i & 63);
                }
            }
            while (!r.empty()) {
                size_t b = r.lowest();
                if (!pivots[b]) {
                    pivots[b] = std::move(r);
                    break;
                }
                r ^= *pivots[b];
            }
        }
    }
    std::vector<PauliChain> out(m);
    for (size_t b = m; b-- > 0;) {
        if (!pivots[b]) {
            throw std::logic_error("stabilizer generators are not independent");
        }
        Row &row = *pivots[b];
        for (size_t hi = b + 1; hi < m; hi++) {
            if (row.test(hi)) {
                row ^= *pivots[hi];
            }
        }
        out[b] = row.chain;
    }
    return out;
}

}  // namespace

CodeLayout build_code(CodeKind kind, int d) {
    if (d < 3 || d % 2 == 0) {
        throw std::invalid_argument("code distance must be odd and >= 3, got " + std::to_string(d));
    }
    CodeLayout layout;
    layout.kind_ = kind;
    layout.distance_ = d;
    size_t n = static_cast<size_t>(d) * d;
    auto index = [d](int r, int c) { return static_cast<size_t>(r * d + c); };
    // Qubits conjugated by Hadamard to turn the CSS layout into XZZX.
    auto hadamard = [kind](int r, int c) { return kind == CodeKind::XZZX && ((r + c) & 1); };
    auto local = [&](int r, int c, Pauli p) {
        if (hadamard(r, c) && (p == Pauli::X || p == Pauli::Z)) {
            return p == Pauli::X ? Pauli::Z : Pauli::X;
        }
        return p;
    };

    for (int r = -1; r < d; r++) {
        for (int c = -1; c < d; c++) {
            bool x_type = ((r + c) & 1) == 0;
            bool top_bottom = r == -1 || r == d - 1;
            bool left_right = c == -1 || c == d - 1;
            if (top_bottom && left_right) {
                continue;
            }
            // Weight-2 X-type on top/bottom, Z-type on left/right.
            if (top_bottom && !x_type) {
                continue;
            }
            if (left_right && x_type) {
                continue;
            }
            PauliChain stab(n);
            for (int dr = 0; dr < 2; dr++) {
                for (int dc = 0; dc < 2; dc++) {
                    int qr = r + dr;
                    int qc = c + dc;
                    if (qr < 0 || qr >= d || qc < 0 || qc >= d) {
                        continue;
                    }
                    stab.set(index(qr, qc), local(qr, qc, x_type ? Pauli::X : Pauli::Z));
                }
            }
            layout.sparse_stabilizers_.push_back(to_sparse(stab));
            layout.stabilizers_.push_back(std::move(stab));
            layout.plaquettes_.emplace_back(r, c);
        }
    }

    // X_L: left column, Z_L: top row (CSS frame).
    layout.logical_x_ = PauliChain(n);
    layout.logical_z_ = PauliChain(n);
    for (int k = 0; k < d; k++) {
        layout.logical_x_.set(index(k, 0), local(k, 0, Pauli::X));
        layout.logical_z_.set(index(0, k), local(0, k, Pauli::Z));
    }
    layout.logicals_[class_index(ClassLabel::I)] = PauliChain(n);
    layout.logicals_[class_index(ClassLabel::X)] = layout.logical_x_;
    layout.logicals_[class_index(ClassLabel::Z)] = layout.logical_z_;
    layout.logicals_[class_index(ClassLabel::Y)] = compose(layout.logical_x_, layout.logical_z_);
    for (size_t k = 0; k < 4; k++) {
        layout.sparse_logicals_[k] = to_sparse(layout.logicals_[k]);
    }

    // A chain anticommutes with a logical when the parity of its complementary
    // components over the logical's support is odd.
    for (size_t which = 0; which < 2; which++) {
        const PauliChain &logical = which == 0 ? layout.logical_x_ : layout.logical_z_;
        for (size_t q = 0; q < n; q++) {
            Pauli p = logical.get(q);
            if (p == Pauli::X) {
                layout.readout_[which].push_back({static_cast<uint32_t>(q), Pauli::Z});
            } else if (p == Pauli::Z) {
                layout.readout_[which].push_back({static_cast<uint32_t>(q), Pauli::X});
            } else if (p == Pauli::Y) {
                throw std::logic_error("edge logicals carry no Y terms");
            }
        }
    }

    layout.pure_errors_ = solve_pure_errors(layout);
    return layout;
}

Syndrome compute_syndrome(const CodeLayout &layout, const PauliChain &c) {
    if (c.n_qubits() != layout.n_qubits()) {
        throw std::invalid_argument("chain has " + std::to_string(c.n_qubits()) + " qubits, layout has " +
                                    std::to_string(layout.n_qubits()));
    }
    Syndrome s;
    s.bits.resize(layout.n_stabilizers());
    const auto &gens = layout.sparse_stabilizers();
    for (size_t i = 0; i < gens.size(); i++) {
        uint8_t parity = 0;
        for (const auto &[q, p] : gens[i].terms) {
            auto cp = static_cast<uint8_t>(c.get(q));
            auto sp = static_cast<uint8_t>(p);
            // Symplectic form on two-bit Paulis: x1 z2 + z1 x2.
            parity ^= ((cp & 1) & (sp >> 1)) ^ ((cp >> 1) & (sp & 1));
        }
        s.bits[i] = parity;
    }
    return s;
}

PauliChain apply_stabilizer(const CodeLayout &layout, const PauliChain &c, size_t index) {
    if (index >= layout.n_stabilizers()) {
        throw std::out_of_range("stabilizer index " + std::to_string(index) + " out of range");
    }
    return compose(c, layout.stabilizers()[index]);
}

ClassLabel logical_class(const CodeLayout &layout, const PauliChain &c) {
    uint8_t bits[2] = {0, 0};
    for (size_t which = 0; which < 2; which++) {
        for (const auto &t : layout.class_readout()[which]) {
            auto cp = static_cast<uint8_t>(c.get(t.qubit));
            bits[which] ^= (t.component == Pauli::X) ? (cp & 1) : (cp >> 1);
        }
    }
    // Anticommuting with X_L flags a Z component, with Z_L an X component.
    return static_cast<ClassLabel>(bits[1] | (bits[0] << 1));
}

void scramble(const CodeLayout &layout, PauliChain &c, size_t count, Rng &rng) {
    const auto &gens = layout.sparse_stabilizers();
    for (size_t k = 0; k < count; k++) {
        c.apply(gens[uniform_index(rng, gens.size())]);
    }
}

PauliChain representative_chain(const CodeLayout &layout, const Syndrome &s, ClassLabel target) {
    if (s.size() != layout.n_stabilizers()) {
        throw std::invalid_argument("syndrome length does not match layout");
    }
    PauliChain c(layout.n_qubits());
    for (size_t i = 0; i < s.size(); i++) {
        if (s.bits[i]) {
            c *= layout.pure_error(i);
        }
    }
    c *= layout.logical(logical_class(layout, c) * target);
    return c;
}

PauliChain initial_chain(const CodeLayout &layout, const Syndrome &s, ClassLabel target, Rng &rng) {
    PauliChain c = representative_chain(layout, s, target);
    scramble(layout, c, 10 * layout.n_qubits(), rng);
    return c;
}

std::string describe(const CodeLayout &layout) {
    std::ostringstream out;
    out << "code " << code_name(layout.kind()) << " distance " << layout.distance() << " qubits "
        << layout.n_qubits() << " stabilizers " << layout.n_stabilizers() << "\n";
    for (size_t i = 0; i < layout.n_stabilizers(); i++) {
        auto [r, c] = layout.plaquette(i);
        out << "stabilizer " << i << " plaquette " << r << " " << c << " support";
        for (const auto &[q, p] : layout.sparse_stabilizers()[i].terms) {
            out << " " << pauli_char(p) << q;
        }
        out << " chain " << layout.stabilizers()[i].str() << "\n";
    }
    out << "logical_x " << layout.logical_x().str() << "\n";
    out << "logical_z " << layout.logical_z().str() << "\n";
    return out.str();
}

}  // namespace ewd
