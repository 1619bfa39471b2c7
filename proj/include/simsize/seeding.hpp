#pragma once

#include <cstdint>
#include <random>

namespace simsize {

/// (master seed, stream index) pair identifying one independent random stream.
struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
};

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t z);

/// Child seed for one stream:
///   mix64(mix64(master) + (index + 1) * 0x9E3779B97F4A7C15).
/// For a fixed master the map index -> seed is injective, so distinct
/// stream indices never share a seed.
std::uint64_t derive_seed(const SeedSpec& spec);

/// Engine used for every simulated trial and every batch plan.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Uniform draw on [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace simsize
