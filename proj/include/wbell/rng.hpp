#pragma once

// Seeded randomness helpers. All draws map engine words to values through
// explicit arithmetic so that a (seed, inputs) pair pins the byte-exact
// result across platforms and worker counts.

#include <cstdint>
#include <random>
#include <string_view>

namespace wbell::rng {

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{seed, stream, std::uint64_t{0x9e3779b97f4a7c15ull}};
    return Engine(seq);
}

/// Uniform double in [0, 1), 53 bits of randomness.
inline double uniform01(Engine& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1]; safe as a log() argument.
inline double uniform01_open_left(Engine& engine) {
    return static_cast<double>((engine() >> 11) + 1) * 0x1.0p-53;
}

/// Unbiased uniform integer in [0, bound) via rejection.
inline std::uint64_t uniform_below(Engine& engine, std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t r;
    do {
        r = engine();
    } while (r >= limit);
    return r % bound;
}

/// FNV-1a, used to derive independent per-setting sampling streams.
inline std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace wbell::rng
