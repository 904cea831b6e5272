#include "kahlerlab/quadrature.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "kahlerlab/types.hpp"

namespace kahlerlab::disk {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "quadrature needs at least one node");
  QuadratureRule q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2 / ((1 - x * x) * dp * dp);
    q.nodes[i] = -x;
    q.nodes[n - 1 - i] = x;
    q.weights[i] = q.weights[n - 1 - i] = w;
  }
  for (int i = 0; i < n; ++i) {
    q.nodes[i] = a + 0.5 * (b - a) * (q.nodes[i] + 1);
    q.weights[i] *= 0.5 * (b - a);
  }
  return q;
}

// Modified Chebyshev algorithm with monic shifted-Legendre moments
// ∫₀¹ −log(x) p_k(x) dx = (−1)^k (k!)² / ((2k)! k (k+1)), then Golub–Welsch.
QuadratureRule gauss_log(int n) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "quadrature needs at least one node");
  const int m = 2 * n;
  std::vector<double> a(m, 0.5), b(m, 0.0), mom(m);
  for (int k = 1; k < m; ++k) b[k] = k * k / (4.0 * (4.0 * k * k - 1));
  mom[0] = 1;
  double ratio = 1;  // (k!)² / (2k)!
  for (int k = 1; k < m; ++k) {
    ratio *= static_cast<double>(k) / (2 * k - 1) * k / (2 * k);
    mom[k] = (k % 2 ? -1.0 : 1.0) * ratio / (k * (k + 1.0));
  }

  std::vector<double> alpha(n), beta(n);
  std::vector<double> sig_prev(m + 1, 0.0), sig(mom.begin(), mom.end()), sig_next(m + 1, 0.0);
  sig.push_back(0);
  alpha[0] = a[0] + mom[1] / mom[0];
  beta[0] = mom[0];
  for (int k = 1; k < n; ++k) {
    for (int l = k; l < m - k; ++l) {
      sig_next[l] = sig[l + 1] - (alpha[k - 1] - a[l]) * sig[l] - beta[k - 1] * sig_prev[l] +
                    b[l] * sig[l - 1];
    }
    alpha[k] = a[k] + sig_next[k + 1] / sig_next[k] - sig[k] / sig[k - 1];
    beta[k] = sig_next[k] / sig[k - 1];
    sig_prev.swap(sig);
    sig.swap(sig_next);
  }

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    J(k, k) = alpha[k];
    if (k + 1 < n) J(k, k + 1) = J(k + 1, k) = std::sqrt(beta[k + 1]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadratureRule q;
  for (int k = 0; k < n; ++k) {
    q.nodes.push_back(es.eigenvalues()[k]);
    const double v = es.eigenvectors()(0, k);
    q.weights.push_back(beta[0] * v * v);
  }
  return q;
}

}  // namespace kahlerlab::disk
