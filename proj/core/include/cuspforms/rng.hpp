#pragma once

// Deterministic seeded random stream (splitmix64).  Used by every randomized
// sweep so that a (config, seed) pair reproduces the identical run; the
// modulo reduction in below() has negligible bias for the p-power bounds
// used here and keeps the stream platform-independent.

#include <cstdint>

namespace cuspforms {

class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : s_(seed) {}

  std::uint64_t next() {
    s_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform-ish integer in [0, bound), bound >= 1.
  std::int64_t below(std::int64_t bound) {
    return static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(bound));
  }

 private:
  std::uint64_t s_;
};

}  // namespace cuspforms
