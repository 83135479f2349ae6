#pragma once

// Deterministic seeded RNG. std::mt19937 distributions are not guaranteed
// bit-identical across standard libraries, so we draw from splitmix64 and
// reduce by hand. Same seed => same stream on every platform.

#include <cstdint>

#include "nok/rational.hpp"

namespace nok {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, n)
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  long long int_in(long long lo, long long hi) {  // inclusive
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  // rational with |numerator| <= h, 1 <= denominator <= h, nonzero
  Rat rat_of_height(long long h) {
    long long n = 0;
    while (n == 0) n = int_in(-h, h);
    return Rat(n, int_in(1, h));
  }

  // child generator for an independent deterministic substream
  Rng fork(std::uint64_t tag) {
    Rng r(state_ ^ (0xa0761d6478bd642fULL * (tag + 1)));
    r.next();
    return r;
  }

 private:
  std::uint64_t state_;
};

}  // namespace nok
