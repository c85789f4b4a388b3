#pragma once

#include <cstdint>

namespace optsp {

// SplitMix64. Every randomized routine takes an explicit seed and derives
// sub-streams with derive_seed so results never depend on call order.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1) with 53 bits
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in [0, bound), rejection sampling; bound must be positive
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t r;
    do {
      r = next();
    } while (r >= limit);
    return r % bound;
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 a(seed ^ 0x5851f42d4c957f2dULL);
  SplitMix64 b(a.next() + stream * 0xda942042e4dd58b5ULL);
  return b.next();
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t s1, std::uint64_t s2) {
  return derive_seed(derive_seed(seed, s1), s2);
}

}  // namespace optsp
