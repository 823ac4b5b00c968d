#pragma once

/**
 * Counter-based pseudo-random stream: SplitMix64 run in counter mode,
 * keyed by (seed, stream_id). The output for draw i is
 * mix(key + (i+1) * GOLDEN), so a stream is a pure function of
 * (seed, stream_id, i): identical inputs reproduce identical samples
 * bit for bit, and distinct stream_ids give statistically independent
 * streams. The algorithm choice is fixed here so results stay
 * reproducible across runs and thread counts.
 */

#include <cstdint>

namespace census {

struct RngStream {
  uint64_t key = 0;
  uint64_t counter = 0;

  static constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  static uint64_t mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  RngStream() = default;
  RngStream(uint64_t seed, uint64_t stream_id)
      : key(mix(seed + kGolden) ^ mix(stream_id * kGolden + 0x243F6A8885A308D3ULL)) {}

  uint64_t next_u64() {
    counter += 1;
    return mix(key + counter * kGolden);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }
};

}  // namespace census
