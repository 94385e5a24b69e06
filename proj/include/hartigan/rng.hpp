#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace hartigan {
namespace rng {

// Counter-based randomness: every draw is a pure function of (seed, indices),
// so parallel consumers never share generator state and results do not
// depend on call order or platform library details.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                         std::uint64_t c = 0) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

// Uniform in (0, 1]; never exactly 0 so it is safe inside log().
inline double unit_open(std::uint64_t h) {
    return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
}

inline double uniform01(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                        std::uint64_t c = 0) {
    return unit_open(mix(seed, a, b, c));
}

inline double uniform(std::uint64_t seed, double lo, double hi, std::uint64_t a,
                      std::uint64_t b = 0, std::uint64_t c = 0) {
    return lo + (hi - lo) * uniform01(seed, a, b, c);
}

// Standard normal via Box-Muller on two independent hashed uniforms.
inline double gaussian(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                       std::uint64_t c = 0) {
    double u1 = unit_open(mix(seed, a, b, 2 * c));
    double u2 = unit_open(mix(seed, a, b, 2 * c + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Integer in [0, n).
inline std::uint64_t bounded(std::uint64_t h, std::uint64_t n) {
    // 128-bit multiply avoids the modulo bias without a retry loop.
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(h) * n) >> 64);
}

inline std::uint64_t randint(std::uint64_t seed, std::uint64_t n, std::uint64_t a,
                             std::uint64_t b = 0, std::uint64_t c = 0) {
    return bounded(mix(seed, a, b, c), n);
}

// In-place Fisher-Yates driven by the counter stream (stable across platforms,
// unlike std::shuffle whose algorithm is unspecified).
template <class T>
void shuffle(std::uint64_t seed, std::vector<T>& v) {
    constexpr std::uint64_t kShuffleSalt = 0x53484646u;
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(randint(seed, i, kShuffleSalt, i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace rng
}  // namespace hartigan
