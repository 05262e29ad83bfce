#pragma once

#include <cstdint>

namespace gkt {

// splitmix64; self-contained so that seeded runs are reproducible across
// platforms and standard library versions.
struct Rng {
  std::uint64_t s;

  explicit Rng(std::uint64_t seed) : s(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t bounded(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

  long range(long lo, long hi) {  // inclusive bounds
    return lo + long(bounded(std::uint64_t(hi - lo + 1)));
  }
};

}  // namespace gkt
