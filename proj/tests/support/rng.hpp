#pragma once

#include <cstdint>

namespace testsupport {

// SplitMix64; deterministic across platforms.
struct Rng {
  uint64_t state;

  explicit Rng(uint64_t seed = 0x9e3779b97f4a7c15ull) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n).
  uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }

  bool chance(double p) { return next() % 10000 < p * 10000; }
};

}  // namespace testsupport
