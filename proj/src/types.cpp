#include "kahlerlab/types.hpp"

#include <Eigen/Eigenvalues>

namespace kahlerlab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonPositiveDefinite: return "NonPositiveDefinite";
    case ErrorKind::SingularityTooClose: return "SingularityTooClose";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::DomainExceeded: return "DomainExceeded";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

LabError::LabError(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw LabError(kind, what); }

RVec to_real(const CVec& z) {
  RVec x(2 * z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    x[2 * k] = z[k].real();
    x[2 * k + 1] = z[k].imag();
  }
  return x;
}

CVec to_complex(const RVec& x) {
  CVec z(x.size() / 2);
  for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = cplx(x[2 * k], x[2 * k + 1]);
  return z;
}

cplx hermitian_pair(const CMat& G, const CVec& u, const CVec& v) {
  return (u.transpose() * G * v.conjugate())(0, 0);
}

double hermitian_norm2(const CMat& G, const CVec& u) { return hermitian_pair(G, u, u).real(); }

RMat realify(const CMat& G) {
  const Eigen::Index n = G.rows();
  RMat A(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double P = 0.5 * (G(i, j).real() + G(j, i).real());
      const double Q = 0.5 * (G(i, j).imag() - G(j, i).imag());
      A(2 * i, 2 * j) = P;
      A(2 * i + 1, 2 * j + 1) = P;
      A(2 * i, 2 * j + 1) = Q;
      A(2 * i + 1, 2 * j) = -Q;
    }
  }
  return A;
}

double min_eigenvalue(const CMat& G) {
  if (G.rows() == 1) return G(0, 0).real();
  if (G.rows() == 2) {
    const double a = G(0, 0).real(), d = G(1, 1).real();
    const double b2 = std::norm(0.5 * (G(0, 1) + std::conj(G(1, 0))));
    return 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + b2);
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(G, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

}  // namespace kahlerlab
