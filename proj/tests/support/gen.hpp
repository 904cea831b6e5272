#pragma once

// Seeded generators for property tests. splitmix64 so that a case can be
// replayed from the seed printed on failure.

#include <cmath>
#include <cstdint>
#include <numbers>

#include "kahlerlab/types.hpp"

namespace testsupport {

using kahlerlab::cplx;
using kahlerlab::CVec;
using kahlerlab::RVec;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : s_(seed * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL) {}

  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
  double normal() {
    const double u = 1 - uniform(), v = uniform();
    return std::sqrt(-2 * std::log(u)) * std::cos(2 * std::numbers::pi * v);
  }
  cplx cnormal() { return {normal(), normal()}; }
  CVec cvec(int n) {
    CVec z(n);
    for (int k = 0; k < n; ++k) z[k] = cnormal();
    return z;
  }
  CVec unit(int n) {
    CVec z = cvec(n);
    return z / z.norm();
  }
  // Uniform in the ball of radius r in ℂⁿ.
  CVec in_ball(int n, double r) { return unit(n) * (r * std::pow(uniform(), 1.0 / (2 * n))); }
  RVec rvec(int m) {
    RVec x(m);
    for (int k = 0; k < m; ++k) x[k] = normal();
    return x;
  }
  double log_uniform(double a, double b) { return a * std::pow(b / a, uniform()); }

 private:
  std::uint64_t s_;
};

}  // namespace testsupport
