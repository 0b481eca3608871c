#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ewd {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
inline uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Counter-based sub-seed: folds each path component into the master seed
/// with the SplitMix64 finalizer. derive_seed(s, {a, b}) is a pure function
/// of (s, a, b), so the seed of work item i never depends on scheduling.
inline uint64_t derive_seed(uint64_t master, std::initializer_list<uint64_t> path) {
    uint64_t s = mix64(master);
    for (uint64_t x : path) {
        s = mix64(s ^ mix64(x));
    }
    return s;
}

/// Uniform on [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline size_t uniform_index(Rng &rng, size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng); }

}  // namespace ewd
