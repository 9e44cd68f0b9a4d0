#pragma once

#include <cstdint>

// Counter-based hashing shared by the generators and the Monte-Carlo checks.
namespace dimlab::rng {

inline std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t child_key(std::uint64_t parent, std::uint64_t local) {
    return mix(parent ^ mix(local + 0x632be59bd9b4e019ULL));
}

// Uniform in [0, 1) from the top 53 bits.
inline double unit(std::uint64_t key) { return double(key >> 11) * 0x1.0p-53; }

}  // namespace dimlab::rng
