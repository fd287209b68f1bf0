#pragma once

#include <cstdint>
#include <random>

namespace stmf {

using Rng = std::mt19937_64;

/// SplitMix64 finaliser; used to derive independent seeds from a base seed
/// and a stream tag so that, e.g., mask splits never share a stream with
/// factor initialisation.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace streams {
inline constexpr std::uint64_t kOrdering = 1;
inline constexpr std::uint64_t kInit = 2;
inline constexpr std::uint64_t kMask = 3;
inline constexpr std::uint64_t kFactorsLeft = 4;
inline constexpr std::uint64_t kFactorsRight = 5;
}  // namespace streams

}  // namespace stmf
