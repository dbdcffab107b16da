#pragma once

#include <cstdint>

#include <boost/random/mersenne_twister.hpp>

namespace ltesched {

// boost::random gives bit-identical streams across standard libraries,
// which the golden files depend on.
using Rng = boost::random::mt19937_64;

/// Derives an independent stream seed from a run seed and a stream tag (splitmix64 finalizer).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1) with 53 bits of precision.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace ltesched
