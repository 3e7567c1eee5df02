#pragma once
#ifndef TRISECANT_RANDOM_HPP
#define TRISECANT_RANDOM_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "trisecant/numeric.hpp"

namespace trisecant {

/// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for sub-stream `index` of `seed`, optionally tagged by a purpose salt.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t salt = 0) {
  return mix_seed(mix_seed(seed ^ mix_seed(salt)) + index);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(engine_); }

  Complex unit_complex() {
    const double theta = 2.0 * 3.14159265358979323846 * uniform();
    return {std::cos(theta), std::sin(theta)};
  }

  std::vector<double> normal_vector(std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = normal();
    return v;
  }

  /// Random rational p/q with 1 <= |p| <= bound, 1 <= q <= bound.
  Rational small_rational(long bound = 1000) {
    long p = 0;
    while (p == 0) p = integer(-bound, bound);
    const long q = integer(1, bound);
    Rational r(p, q);
    r.canonicalize();
    return r;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace trisecant

#endif  // TRISECANT_RANDOM_HPP
