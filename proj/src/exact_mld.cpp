#include <bit>
#include <cmath>
#include <string>

#include "ewd/baselines.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ewd {

namespace {

void check_capacity(const CodeLayout &layout) {
    if (layout.n_stabilizers() > kMaxEnumeratedGenerators) {
        throw CapacityError("exact enumeration supports at most " + std::to_string(kMaxEnumeratedGenerators) +
                            " generators (d <= 5), layout has " + std::to_string(layout.n_stabilizers()));
    }
}

// Counts the Gray-code block [begin, end) of one class into `table`.
void enumerate_block(const CodeLayout &layout, const PauliChain &start, uint64_t begin, uint64_t end,
                     CountTable &table) {
    const auto &gens = layout.sparse_stabilizers();
    PauliChain c = start;
    uint64_t gray = begin ^ (begin >> 1);
    for (uint64_t bits = gray; bits; bits &= bits - 1) {
        c.apply(gens[std::countr_zero(bits)]);
    }
    PauliCounts counts = count_paulis(c);
    for (uint64_t i = begin; i < end; i++) {
        table.counts[table.index(counts)]++;
        if (i + 1 < end) {
            const SparsePauli &g = gens[std::countr_zero(i + 1)];
            counts += c.delta_for(g);
            c.apply(g);
        }
    }
}

}  // namespace

uint64_t CountTable::total() const {
    uint64_t t = 0;
    for (uint64_t c : counts) {
        t += c;
    }
    return t;
}

CountTable &CountTable::operator+=(const CountTable &o) {
    for (size_t i = 0; i < counts.size(); i++) {
        counts[i] += o.counts[i];
    }
    return *this;
}

ClassHistogram CountTable::histogram(ClassLabel label, double alpha_x, double alpha_y) const {
    ClassHistogram h;
    h.label = label;
    int n = static_cast<int>(n_qubits);
    for (int nx = 0; nx <= n; nx++) {
        for (int ny = 0; ny + nx <= n; ny++) {
            for (int nz = 0; nz + ny + nx <= n; nz++) {
                PauliCounts c{nx, ny, nz};
                uint64_t k = counts[index(c)];
                if (k) {
                    h.add(effective_weight(alpha_x, alpha_y, c), k);
                }
            }
        }
    }
    return h;
}

ExactCounts exact_class_counts_serial(const CodeLayout &layout, const Syndrome &s) {
    check_capacity(layout);
    ExactCounts out;
    uint64_t total = uint64_t{1} << layout.n_stabilizers();
    for (ClassLabel c : kAllClasses) {
        CountTable table(layout.n_qubits());
        enumerate_block(layout, representative_chain(layout, s, c), 0, total, table);
        out.classes[class_index(c)] = std::move(table);
    }
    return out;
}

ExactCounts exact_class_counts(const CodeLayout &layout, const Syndrome &s) {
    check_capacity(layout);
    size_t m = layout.n_stabilizers();
    uint64_t total = uint64_t{1} << m;
    uint64_t blocks = m >= 8 ? 64 : 1;
    uint64_t block_size = total / blocks;
    std::array<PauliChain, 4> starts;
    for (ClassLabel c : kAllClasses) {
        starts[class_index(c)] = representative_chain(layout, s, c);
    }

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    // Per-thread accumulators, merged after the parallel region.
    std::vector<std::array<CountTable, 4>> partial(
        static_cast<size_t>(threads),
        std::array<CountTable, 4>{CountTable(layout.n_qubits()), CountTable(layout.n_qubits()),
                                  CountTable(layout.n_qubits()), CountTable(layout.n_qubits())});
    const int64_t tasks = static_cast<int64_t>(4 * blocks);
#pragma omp parallel for schedule(dynamic, 1)
    for (int64_t task = 0; task < tasks; task++) {
        int tid = 0;
#ifdef _OPENMP
        tid = omp_get_thread_num();
#endif
        size_t cls = static_cast<size_t>(task) / blocks;
        uint64_t block = static_cast<uint64_t>(task) % blocks;
        enumerate_block(layout, starts[cls], block * block_size, (block + 1) * block_size,
                        partial[static_cast<size_t>(tid)][cls]);
    }

    ExactCounts out;
    for (size_t k = 0; k < 4; k++) {
        out.classes[k] = CountTable(layout.n_qubits());
        for (auto &p : partial) {
            out.classes[k] += p[k];
        }
    }
    return out;
}

ExactResult exact_from_counts(const ExactCounts &counts, const NoiseParams &noise) {
    ExactResult r;
    for (ClassLabel c : kAllClasses) {
        r.histograms[class_index(c)] = counts.classes[class_index(c)].histogram(c, noise.alpha_x, noise.alpha_y);
    }
    r.probabilities = class_probabilities(r.histograms, noise.beta, ProbabilityMode::All);
    r.chosen = choose_class(r.probabilities);
    return r;
}

ExactResult exact_mld(const CodeLayout &layout, const Syndrome &s, const NoiseParams &noise) {
    return exact_from_counts(exact_class_counts(layout, s), noise);
}

double pure_z_failure_rate(int d, double p) {
    if (d < 1 || d % 2 == 0) {
        throw std::domain_error("pure-Z failure rate needs odd d, got " + std::to_string(d));
    }
    if (!(p >= 0.0 && p <= 0.5)) {
        throw std::domain_error("pure-Z failure rate needs 0 <= p <= 1/2, got " + std::to_string(p));
    }
    double sum = 0.0;
    double binom = 1.0;  // C(d, w), built up from w = 0
    for (int w = 0; w <= d; w++) {
        if (w > 0) {
            binom = binom * (d - w + 1) / w;
        }
        if (w >= (d + 1) / 2) {
            sum += binom * std::pow(p, w) * std::pow(1.0 - p, d - w);
        }
    }
    return sum;
}

}  // namespace ewd
