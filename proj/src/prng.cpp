#include "lambdap/prng.hpp"

namespace lambdap::prng {

std::vector<PrngKey> splitKey(PrngKey key, std::size_t n) {
    std::vector<PrngKey> keys;
    keys.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t offset = kGamma * (static_cast<std::uint64_t>(i) + 1);  // mod 2^64
        keys.push_back(PrngKey{finalize(key.bits ^ offset)});
    }
    return keys;
}

double genUniform(PrngKey key) {
    return static_cast<double>(finalize(key.bits) >> 11) * 0x1.0p-53;
}

} // namespace lambdap::prng
