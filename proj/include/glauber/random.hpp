#ifndef GLAUBER_RANDOM_HPP
#define GLAUBER_RANDOM_HPP

#include <cstdint>
#include <random>

namespace glauber {

// mt19937_64 output is fully specified by the standard, unlike the std
// distributions, so every draw below is built directly on raw 64-bit words.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, bound) (Lemire's multiply-shift with rejection).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
    std::uint64_t x = rng();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            x = rng();
            m = static_cast<__uint128_t>(x) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

// Replica i of an ensemble seeded with `seed` uses the stream seed + i.
inline Rng replica_rng(std::uint64_t seed, std::uint64_t replica) { return Rng(seed + replica); }

}  // namespace glauber

#endif  // GLAUBER_RANDOM_HPP
