#pragma once

#include <cmath>
#include <cstdint>

namespace aquannr::detail {

/// splitmix64 step; also usable as a stateless mixer.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2)));
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix(mix(a, b), c);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
    return mix(mix(a, b, c), d);
}

/// Uniform double in (0, 1] from a 64-bit hash.
inline double uniform01(std::uint64_t h) {
    return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
}

/// Standard normal deviate from a 64-bit hash (Box-Muller, first branch).
inline double gauss01(std::uint64_t h) {
    const double u1 = uniform01(h);
    const double u2 = uniform01(splitmix64(h ^ 0xda3e39cb94b95bdbULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace aquannr::detail
