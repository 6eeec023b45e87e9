#ifndef SILVERSEG_RNG_HPP
#define SILVERSEG_RNG_HPP

#include <cstdint>
#include <string_view>

#include "silverseg/error.hpp"

/*
 * Self-contained deterministic RNG for every seeded operation. The standard
 * <random> distributions are implementation-defined, which would break the
 * contract that the same seed yields bit-identical outputs on every
 * platform, so seeding, stream derivation, and bounded draws are all pinned
 * here.
 */

namespace silverseg {

class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Unbiased draw from [0, bound) by rejection sampling.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) throw Error("uniform_below: bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

private:
  std::uint64_t state_;
};

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Derives an independent substream key from a base seed and salts.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t salt_a,
                                   std::uint64_t salt_b = 0, std::uint64_t salt_c = 0) {
  SplitMix64 m(seed);
  std::uint64_t k = m.next() ^ salt_a;
  SplitMix64 m2(k);
  k = m2.next() ^ salt_b;
  SplitMix64 m3(k);
  return m3.next() ^ salt_c;
}

}  // namespace silverseg

#endif
