#pragma once

// Seeded random streams. Every consumer derives an independent engine from
// the user seed plus a tuple of keys (stream tag, run index, ...), so results
// do not depend on evaluation order or thread count.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace stelnet {

namespace streams {
inline constexpr std::uint64_t kTopology = 0x746f706fULL;
inline constexpr std::uint64_t kNormal = 0x6e6f726dULL;
inline constexpr std::uint64_t kGamma = 0x67616d6dULL;
inline constexpr std::uint64_t kGate = 0x67617465ULL;
inline constexpr std::uint64_t kExperiment = 0x65787072ULL;
}  // namespace streams

inline std::mt19937_64 make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * (keys.size() + 1));
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffULL));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (auto k : keys) push(k);
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

/// Derives a 64-bit sub-seed from a seed and keys.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  auto rng = make_stream(seed, keys);
  return rng();
}

}  // namespace stelnet
