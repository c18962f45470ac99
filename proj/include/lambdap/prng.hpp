#pragma once

#include <cstdint>
#include <vector>

#include "lambdap/value.hpp"

namespace lambdap::prng {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

// SplitMix64 output function.
constexpr std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// key_i = finalize(key XOR gamma * (i + 1)), i in [0, n).
std::vector<PrngKey> splitKey(PrngKey key, std::size_t n);

// Top 53 bits of finalize(key) scaled into [0, 1).
double genUniform(PrngKey key);

} // namespace lambdap::prng
