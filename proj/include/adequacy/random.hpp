#pragma once

#include <cstdint>
#include <random>

namespace adequacy {

/// Engine used for all resampling. Its output sequence is fixed by the
/// standard, so seeded runs agree across platforms.
using Engine = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of substream (`index`, `lane`) under a master seed. Distinct
/// (index, lane) pairs give unrelated streams; the mapping is pure so
/// replicates can run in any order or on any thread.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t lane = 0) {
  return mix64(mix64(mix64(seed) ^ index) ^ (lane * 0xD1B54A32D192ED03ULL));
}

inline Engine substream(std::uint64_t seed, std::uint64_t index, std::uint64_t lane = 0) {
  return Engine(substream_seed(seed, index, lane));
}

/// Unbiased draw from {0, ..., n-1}. Unlike std::uniform_int_distribution
/// the result does not depend on the standard library implementation.
inline std::uint64_t uniform_index(Engine& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % n;
  }
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Engine& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace adequacy
