#pragma once

#include <cstdint>

namespace mwarp {

/// splitmix64(seed + (index + 1) * golden): seed of the index-th independent
/// stream derived from a user seed. Used wherever per-item randomness must
/// not depend on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace mwarp
