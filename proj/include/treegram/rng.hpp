#pragma once

#include <cstdint>

namespace treegram {

// SplitMix64 stream. Chosen over std::mt19937_64 because outputs must be
// byte-identical across standard library implementations; std distributions
// carry no such guarantee. Identified as "splitmix64-v1" in output metadata.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  // Derives an independent per-item stream from (seed, index).
  static SplitMix64 for_index(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed);
    std::uint64_t a = mixer.next_u64();
    return SplitMix64(a ^ (index * 0x9e3779b97f4a7c15ULL) ^ mixer.next_u64());
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound).
  std::uint64_t next_below(std::uint64_t bound) {
    // Rejection sampling keeps the draw exactly uniform.
    std::uint64_t threshold = (0ULL - bound) % bound;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  static constexpr const char* algorithm_id() { return "splitmix64-v1"; }

 private:
  std::uint64_t state_;
};

}  // namespace treegram
