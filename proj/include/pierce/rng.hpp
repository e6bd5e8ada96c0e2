#pragma once

#include <cstdint>
#include <string_view>

namespace pierce {

// Counter-based 64-bit generator (splitmix64 over an incrementing counter).
// All randomized components derive labeled sub-streams from one root seed so
// runs are reproducible across platforms; no std::*_distribution is used
// anywhere because their outputs are implementation-defined.
class Rng {
 public:
  Rng() : Rng(0x9e3779b97f4a7c15ull) {}
  explicit Rng(std::uint64_t seed) : counter_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (counter_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). Rejection-free 128-bit multiply (Lemire) with the
  // small bias correction loop.
  std::uint64_t next_below(std::uint64_t n) {
    if (n <= 1) return 0;
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    std::uint64_t lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t t = (0 - n) % n;
      while (lo < t) {
        x = next_u64();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  std::int64_t next_in(std::int64_t lo, std::int64_t hi) {  // inclusive range
    return lo + static_cast<std::int64_t>(
                    next_below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  bool next_bool(double p) { return next_double() < p; }

  // Labeled sub-stream: deterministic function of (state, label).
  Rng fork(std::string_view label) const {
    std::uint64_t h = counter_ ^ 0x2545f4914f6cdd1dull;
    for (char c : label) {
      h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
      h *= 0x100000001b3ull;
    }
    return Rng(h);
  }

  Rng fork(std::string_view label, std::uint64_t index) const {
    Rng r = fork(label);
    r.counter_ ^= 0xd1b54a32d192ed03ull * (index + 1);
    return r;
  }

 private:
  std::uint64_t counter_;
};

}  // namespace pierce
