#pragma once

#include <type_traits>
#include <vector>

#include "kahlerlab/types.hpp"

namespace kahlerlab::fd {

// Central differences in the 2n real coordinates, combined by one Richardson
// step (steps h and h/2), so value errors are O(h⁴).
template <class T>
struct RealDerivatives {
  T value;
  std::vector<T> grad;  // 2n entries
  std::vector<T> hess;  // (2n)² entries, row-major
};

inline CVec shifted(const CVec& z, int a, double s) {
  CVec w = z;
  if (a % 2 == 0)
    w[a / 2] += s;
  else
    w[a / 2] += cplx(0, s);
  return w;
}

inline CVec shifted(const CVec& z, int a, double s, int b, double t) {
  CVec w = shifted(z, a, s);
  if (b % 2 == 0)
    w[b / 2] += t;
  else
    w[b / 2] += cplx(0, t);
  return w;
}

template <class T, class F>
RealDerivatives<T> real_derivatives(F&& f, const CVec& z, double h, bool with_hessian = true) {
  const int m = static_cast<int>(2 * z.size());
  RealDerivatives<T> out;
  out.value = f(z);
  const T& f0 = out.value;
  std::vector<T> g[2], H[2];
  const double steps[2] = {h, 0.5 * h};
  for (int r = 0; r < 2; ++r) {
    const double s = steps[r];
    g[r].resize(m);
    H[r].resize(with_hessian ? m * m : 0);
    for (int a = 0; a < m; ++a) {
      const T fp = f(shifted(z, a, s));
      const T fm = f(shifted(z, a, -s));
      g[r][a] = (fp - fm) / (2 * s);
      if (with_hessian) H[r][a * m + a] = (fp + fm - 2.0 * f0) / (s * s);
    }
    if (!with_hessian) continue;
    for (int a = 0; a < m; ++a) {
      for (int b = a + 1; b < m; ++b) {
        const T v = (f(shifted(z, a, s, b, s)) - f(shifted(z, a, s, b, -s)) -
                     f(shifted(z, a, -s, b, s)) + f(shifted(z, a, -s, b, -s))) /
                    (4 * s * s);
        H[r][a * m + b] = v;
        H[r][b * m + a] = v;
      }
    }
  }
  out.grad.resize(m);
  for (int a = 0; a < m; ++a) out.grad[a] = (4.0 * g[1][a] - g[0][a]) / 3.0;
  if (with_hessian) {
    out.hess.resize(m * m);
    for (int k = 0; k < m * m; ++k) out.hess[k] = (4.0 * H[1][k] - H[0][k]) / 3.0;
  }
  return out;
}

template <class T>
using Wirtinger = std::conditional_t<std::is_same_v<T, double>, cplx, T>;

// Wirtinger derivatives from real ones.
template <class T>
Wirtinger<T> d_holo(const RealDerivatives<T>& D, int k) {
  return Wirtinger<T>(0.5 * (D.grad[2 * k] - cplx(0, 1) * D.grad[2 * k + 1]));
}

// ∂_k ∂̄_l from the real Hessian.
template <class T>
Wirtinger<T> d_holo_antiholo(const RealDerivatives<T>& D, int k, int l) {
  const int m = static_cast<int>(D.grad.size());
  auto h = [&](int a, int b) -> const T& { return D.hess[a * m + b]; };
  return Wirtinger<T>(0.25 * ((h(2 * k, 2 * l) + h(2 * k + 1, 2 * l + 1)) +
                              cplx(0, 1) * (h(2 * k, 2 * l + 1) - h(2 * k + 1, 2 * l))));
}

}  // namespace kahlerlab::fd
