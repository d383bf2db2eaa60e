// Deterministic random number generation. std::normal_distribution and
// friends are implementation-defined, so sampling is done by hand on top of
// mt19937_64 to keep runs bit-reproducible across standard libraries.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gsavatar {

class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Integer in [0, n).
  uint64_t uniform_index(uint64_t n) {
    // Rejection-free modulo is fine here; bias is negligible for n << 2^64
    // and the result is deterministic, which is what matters.
    return gen_() % n;
  }

  // Standard normal via Box-Muller (cached pair).
  double normal() {
    if (has_cache_) {
      has_cache_ = false;
      return cache_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    cache_ = r * std::sin(a);
    has_cache_ = true;
    return r * std::cos(a);
  }

  // Derives an independent stream; useful for per-subject/per-view seeds.
  Rng fork(uint64_t salt) {
    uint64_t s = next_u64();
    return Rng(s ^ (salt * 0x9e3779b97f4a7c15ull));
  }

 private:
  std::mt19937_64 gen_;
  double cache_ = 0;
  bool has_cache_ = false;
};

}  // namespace gsavatar
