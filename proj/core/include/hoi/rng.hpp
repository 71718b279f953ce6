#pragma once

#include <cstdint>
#include <random>

namespace hoi {

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Counter-based seed splitting: every (root, stream, lane) triple maps to an
// independent engine seed, so sibling streams can be generated in any order
// without affecting each other's content.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream,
                                 std::uint64_t lane = 0) {
  const std::uint64_t a = mix64(root ^ (0x9E3779B97F4A7C15ull * (stream + 1)));
  return mix64(a ^ (0xC2B2AE3D27D4EB4Full * (lane + 1)));
}

inline std::mt19937_64 make_engine(std::uint64_t root, std::uint64_t stream,
                                   std::uint64_t lane = 0) {
  return std::mt19937_64(derive_seed(root, stream, lane));
}

}  // namespace hoi
