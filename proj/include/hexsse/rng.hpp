#pragma once

#include <array>
#include <cstdint>

namespace hexsse {

/// xoshiro256** (Blackman & Vigna), seeded through splitmix64.
///
/// Stream k of a master seed is the generator seeded from that seed and
/// advanced by k calls to jump(); each jump skips 2^128 draws, so streams
/// never overlap in practice. All draws are defined bit-exactly here, so a
/// (seed, stream) pair reproduces the same sequence on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 1);

  static Rng stream(std::uint64_t master_seed, std::uint64_t index);

  std::uint64_t next();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t n);

  bool coin() { return (next() >> 63) != 0; }

  void jump();

  const std::array<std::uint64_t, 4>& state() const { return s_; }

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace hexsse
