// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace cxlsim {

// xoshiro256** 1.0 (Blackman & Vigna), state seeded through splitmix64.
// The generator is pinned by name because generated traces are part of
// the reproducibility contract: same seed, same trace, on any platform.
class Xoshiro256ss {
 public:
  explicit Xoshiro256ss(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      word = splitmix64(x);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform-enough draw in [0, bound). Plain modulo: the bias is
  // negligible at the region sizes used here and keeps the sequence
  // trivial to reproduce in other languages.
  std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_[4];
};

}  // namespace cxlsim
