#pragma once

#include <cstdint>
#include <random>

namespace smt {

using Engine = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derive an independent child seed for stream `index` of `seed`.
/// Replicate r of a Monte-Carlo run always uses derive_seed(seed, r), so the
/// draws do not depend on which worker executes the replicate.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept
{
    return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

inline Engine make_engine(std::uint64_t seed)
{
    return Engine{mix64(seed)};
}

// Named streams used across modules.
inline constexpr std::uint64_t kThetaStream = 0xffff'ffff'0000'0001ULL;

} // namespace smt
