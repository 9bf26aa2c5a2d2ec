#pragma once

#include <cstdint>
#include <limits>

namespace rllcap {

/// Seed plus the substream rule: draws for particle i at step k come from
/// `StreamRng(seed, i, k)`, so results do not depend on how particles are spread
/// over worker threads.
struct RngSpec {
  std::uint64_t seed = 0;
};

/// Counter-based generator: output n of stream (seed, a, b) is the SplitMix64
/// finalizer of a key derived from all four values. Satisfies
/// std::uniform_random_bit_generator.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  StreamRng(std::uint64_t seed, std::uint64_t a, std::uint64_t b)
      : key_(mix(mix(mix(seed) ^ (a + 0x632be59bd9b4e019ULL)) ^ (b + 0x8cb92ba72f3d8dd7ULL))) {}
  explicit StreamRng(std::uint64_t seed) : StreamRng(seed, 0, 0) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace rllcap
