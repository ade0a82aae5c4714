#pragma once

#include <cmath>
#include <cstdint>

namespace citrank {

// splitmix64 (Sebastiano Vigna, public domain). The integer path is exactly
// reproducible across platforms, unlike the unspecified algorithms behind
// std::*_distribution, which is what population determinism rests on.
//
// Floating-point draws use fixed transforms documented on each method.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1): top 53 bits scaled by 2^-53.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log() argument.
  double next_unit_open() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  // Unbiased integer in [0, bound) by rejection; bound must be >= 1.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Standard normal via Box-Muller: sqrt(-2 ln u1) * cos(2 pi u2),
  // consuming exactly two uniforms.
  double next_normal() {
    const double u1 = next_unit_open();
    const double u2 = next_unit();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

 private:
  std::uint64_t state_;
};

// Seed of researcher `index`'s private stream. Distinct indices give
// decorrelated streams, so records can be generated in any order or in
// parallel with no coordination.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mixer(seed ^ (0x9E3779B97F4A7C15ull * (index + 1)));
  return mixer.next();
}

}  // namespace citrank
