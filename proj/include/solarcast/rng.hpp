#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace solarcast {

// Deterministic draws on top of mt19937_64. The standard library's
// distributions and std::shuffle are implementation-defined, so the mappings
// are spelled out here; results are identical across toolchains.

inline double uniform01(std::mt19937_64& rng) {
    // 53 uniform mantissa bits in [0, 1)
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Unbiased integer in [0, n), rejection sampled.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

// Fisher-Yates, back to front.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[bounded(rng, i)]);
    }
}

// splitmix64 finalizer; derives per-epoch shuffle seeds from (seed, counter).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace solarcast
