#pragma once

// Deterministic pseudo-random substreams.
//
// Every node draws from a stream derived from (seed, stream id) alone, so
// the values a node sees never depend on how many other nodes exist or on
// the order in which nodes are visited. Runs repeated with the same seed
// are bit-identical across platforms; no standard-library distribution is
// involved anywhere on the random path.

#include <cstdint>

#include "int128.hpp"

namespace beepsim {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += kGolden);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class Substream {
 public:
  Substream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t a = seed;
    std::uint64_t b = stream ^ kGolden;
    state_ = splitmix64(a) ^ (splitmix64(b) + kGolden);
  }

  std::uint64_t next() { return splitmix64(state_); }

  // Uniform in [0, n), n >= 1. Rejection keeps the draw unbiased.
  std::uint64_t bounded(std::uint64_t n) {
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform in [0, n) for bounds past 64 bits.
  u128 bounded_u128(u128 n) {
    if (n == 0) return 0;
    if (n <= ~std::uint64_t{0}) return bounded(static_cast<std::uint64_t>(n));
    std::uint32_t bits = bit_width_u128(n - 1);
    u128 mask = (bits >= 128) ? ~u128{0} : ((u128{1} << bits) - 1);
    for (;;) {
      u128 r = (u128{next()} << 64) | next();
      r &= mask;
      if (r < n) return r;
    }
  }

  // Uniform in [0, 1) with 53 random bits.
  double unit_real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform_real(double lo, double hi) { return lo + (hi - lo) * unit_real(); }

 private:
  std::uint64_t state_;
};

// Stream ids: node i uses stream i; run-global draws use high tags so they
// can never collide with a node index.
inline constexpr std::uint64_t kStreamTagApproximation = (1ull << 62) + 1;

}  // namespace beepsim
