#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace kahlerlab {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

enum class ErrorKind {
  InvalidArgument,
  NonPositiveDefinite,
  SingularityTooClose,
  NonConvergence,
  DomainExceeded,
  Disconnected,
  Unsupported,
  ConfigError,
};

const char* to_string(ErrorKind kind);

class LabError : public std::runtime_error {
 public:
  LabError(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

// Real coordinates are interleaved: (Re z1, Im z1, Re z2, Im z2, ...).
RVec to_real(const CVec& z);
CVec to_complex(const RVec& x);

// g(u, v̄) = Σ G(i,j) u_i conj(v_j), where G(i,j) = g_{ij̄}.
cplx hermitian_pair(const CMat& G, const CVec& u, const CVec& v);
double hermitian_norm2(const CMat& G, const CVec& u);

// Real symmetric 2n×2n matrix A with xᵀAx = hermitian_norm2(G, ξ).
RMat realify(const CMat& G);

double min_eigenvalue(const CMat& G);

}  // namespace kahlerlab
