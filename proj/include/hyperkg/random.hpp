#pragma once

#include <cstdint>
#include <random>

namespace hyperkg {

// SplitMix64 step. Used to turn a master seed into well-separated
// per-task sub-seeds so that parallel or reordered execution cannot
// change results.
inline std::uint64_t splitmix64(std::uint64_t state) {
    std::uint64_t z = state + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Sub-seed for stream `index` of a master seed. Documented contract:
// derive_seed(seed, i) = splitmix64(seed + (i + 1) * golden gamma).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64{seed};
}

} // namespace hyperkg
