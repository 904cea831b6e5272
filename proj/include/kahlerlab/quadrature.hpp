#pragma once

#include <vector>

namespace kahlerlab::disk {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss–Legendre on [a, b].
QuadratureRule gauss_legendre(int n, double a = 0, double b = 1);

// Gauss rule for ∫₀¹ f(x)·(−log x) dx, exact for polynomials of degree < 2n.
QuadratureRule gauss_log(int n);

}  // namespace kahlerlab::disk
