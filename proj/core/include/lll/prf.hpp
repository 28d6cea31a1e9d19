#pragma once

#include <cstdint>

namespace lll {

/// Stateless 64-bit mixing function (splitmix64 finalizer). Used as the
/// counter-mode PRF underneath resampling tables, MIS priorities and
/// per-trial seed derivation, so that every random decision is a pure
/// function of (seed, counters) and runs reproduce bit-for-bit.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t prf2(std::uint64_t seed, std::uint64_t a) {
    return mix64(seed ^ mix64(a));
}

inline std::uint64_t prf3(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return mix64(seed ^ mix64(a ^ mix64(b)));
}

}  // namespace lll
