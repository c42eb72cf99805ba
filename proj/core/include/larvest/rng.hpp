#ifndef LARVEST_RNG_HPP
#define LARVEST_RNG_HPP

#include <cstdint>

#include "larvest/stats.hpp"

namespace larvest {

/// Counter-based generator: the SplitMix64 finalizer used as a pseudo-random
/// function over (key, counter). Draw i of a stream depends only on the seed,
/// the stream labels, and i, so replicates can be generated in any order (or
/// concurrently) with bit-identical results.
///
/// Construction: key_0 = mix(seed ^ GOLDEN); stream(label) rederives
/// key' = mix(key ^ (GOLDEN * (label + 1))); draw(i) = mix(key + GOLDEN * (i + 1)).
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed) : key_(mix(seed ^ kGolden)) {}

  /// Independent substream for a labelled axis (replicate, batch, ...).
  CounterRng stream(std::uint64_t label) const {
    return CounterRng(key_ ^ (kGolden * (label + 1)), FromKey{});
  }

  std::uint64_t bits(std::uint64_t counter) const {
    return mix(key_ + kGolden * (counter + 1));
  }

  /// Uniform draw strictly inside (0, 1); 53-bit resolution.
  double uniform01(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1p-53;
  }

  /// Standard normal via inverse-CDF of uniform01 (one counter per draw).
  double normal(std::uint64_t counter) const {
    return normal_quantile(uniform01(counter));
  }

private:
  struct FromKey {};
  CounterRng(std::uint64_t key, FromKey) : key_(mix(key)) {}

  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
  }

  std::uint64_t key_;
};

} // namespace larvest

#endif
