#pragma once

#include <cstdint>
#include <utility>

namespace bipart {

// SplitMix64. The constants are fixed so that seeded runs reproduce across
// implementations.
constexpr std::pair<std::uint64_t, std::uint64_t> prng_next(std::uint64_t state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return {state, z ^ (z >> 31)};
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    auto [state, value] = prng_next(state_);
    state_ = state;
    return value;
  }

  // Uniform integer in [0, bound) by rejection; bound must be nonzero.
  constexpr std::uint64_t below(std::uint64_t bound) {
    // 2^64 mod bound, computed without 128-bit arithmetic.
    const std::uint64_t rem = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t v = next();
      if (rem == 0 || v < 0 - rem) return v % bound;
    }
  }

  constexpr std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace bipart
