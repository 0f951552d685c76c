#pragma once

#include <cstdint>
#include <random>

namespace bcrb {

/// Engine used by every sampler in the library. Engines are cheap to
/// construct; create one per logical stream instead of sharing.
using RngEngine = std::mt19937_64;

/// Master seed used by CLI commands and validation suites when the caller
/// does not supply one.
inline constexpr std::uint64_t kDefaultSeed = 20260815u;

/// Derives a child seed from a master seed and a stream index with the
/// SplitMix64 finalizer. Distinct streams give statistically independent
/// engines, so one dataset component can be held fixed while others vary.
inline constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) noexcept {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline RngEngine make_engine(std::uint64_t master, std::uint64_t stream = 0) {
    return RngEngine(mix_seed(master, stream));
}

/// Stream indices of the components of one synthesized dataset, plus the
/// reserved stream that Monte Carlo trial seeds are derived under.
namespace stream {
inline constexpr std::uint64_t matrix = 0;
inline constexpr std::uint64_t amplitudes = 1;
inline constexpr std::uint64_t gamma = 2;
inline constexpr std::uint64_t noise = 3;
inline constexpr std::uint64_t trials = 4;
}  // namespace stream

}  // namespace bcrb
