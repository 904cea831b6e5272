#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "kahlerlab/chart.hpp"
#include "kahlerlab/types.hpp"

namespace kahlerlab::core {

class ScalarField {
 public:
  using Fn = std::function<double(const CVec&)>;

  ScalarField() = default;
  ScalarField(Fn f, std::string name, std::vector<Singularity> singular = {});

  double operator()(const CVec& z) const { return f_(z); }
  const std::string& name() const { return name_; }
  const std::vector<Singularity>& singular() const { return singular_; }
  // Distance from z to the nearest non-smooth set (infinity if none).
  double clearance(const CVec& z) const;
  explicit operator bool() const { return static_cast<bool>(f_); }

 private:
  Fn f_;
  std::string name_;
  std::vector<Singularity> singular_;
};

// Levi form ∂∂̄φ, entry (i,j) = ∂²φ/∂z_i∂z̄_j. Flat |z|²/2 gives ½I.
// Throws NonPositiveDefinite unless the form is positive; h ∈ [1e-6, 1e-2].
CMat metric_from_potential(const ScalarField& phi, const CVec& z, double h = 1e-3);
// Same differences with no sign requirement (for psh tests of arbitrary functions).
CMat levi_form(const ScalarField& phi, const CVec& z, double h = 1e-3);

// Hermitian metric g with entries G(i,j) = g_{ij̄}; |ξ|² = Σ g_{ij̄} ξ_i ξ̄_j.
// Either g = 2∂∂̄φ for a potential φ, or supplied directly.
class HermitianMetricField {
 public:
  using DirectFn = std::function<CMat(const CVec&)>;

  static HermitianMetricField from_potential(ScalarField phi, int n, double h = 1e-3);
  static HermitianMetricField direct(DirectFn g, int n, std::string name,
                                     std::vector<Singularity> singular = {});

  HermitianMetricField() = default;

  // Checked evaluation: throws SingularityTooClose / NonPositiveDefinite.
  CMat operator()(const CVec& z) const;
  CMat unchecked(const CVec& z) const;

  int dimension() const { return n_; }
  double step() const { return h_; }
  const std::string& name() const { return name_; }
  bool has_potential() const { return static_cast<bool>(phi_); }
  const ScalarField& potential() const;
  const std::vector<Singularity>& singular() const { return singular_; }
  double clearance(const CVec& z) const;

  // λ²·g (potential λ²φ when present).
  HermitianMetricField scaled(double lambda2) const;

 private:
  int n_ = 0;
  double h_ = 1e-3;
  std::string name_;
  ScalarField phi_;
  DirectFn g_;
  std::vector<Singularity> singular_;
};

class CurvatureTensor {
 public:
  CurvatureTensor() = default;
  explicit CurvatureTensor(int n) : n_(n), data_(static_cast<size_t>(n) * n * n * n, cplx(0)) {}
  int dimension() const { return n_; }
  cplx& operator()(int i, int j, int k, int l) { return data_[((i * n_ + j) * n_ + k) * n_ + l]; }
  const cplx& operator()(int i, int j, int k, int l) const {
    return data_[((i * n_ + j) * n_ + k) * n_ + l];
  }
  double max_abs() const;

 private:
  int n_ = 0;
  std::vector<cplx> data_;
};

struct CurvatureOptions {
  // Nested differences (metric from potential, then curvature from metric)
  // use this step at both levels; the noise floor scales like ε/h⁴.
  double step = 1e-2;
};

struct CurvatureData {
  CVec point;
  CMat metric;
  CurvatureTensor R;  // R_{ij̄kl̄}
  CMat ricci;         // Ric_{kl̄}
  double scalar = 0;
  double kahler_defect = 0;  // max |∂_k g_{ij̄} − ∂_i g_{kj̄}|
  double symmetry_defect = 0;
};

CurvatureData curvature_tensor(const HermitianMetricField& g, const CVec& z,
                               const CurvatureOptions& opts = {});

struct TangentPair {
  CVec X, Y;
};

// Rescales X and Y to g-unit length.
TangentPair normalized(const CMat& G, const TangentPair& pair);

// −R(X, X̄, Y, Ȳ); equals K(|X|²|Y|² + |g(X,Ȳ)|²) on M_K.
double bisectional(const CurvatureData& R, const TangentPair& pair);
double bk_defect(const CurvatureData& R, double K, const TangentPair& pair);

struct MinBkOptions {
  std::uint64_t seed = 1;
  int samples = 2000;
  int refine_starts = 8;
  int max_iter = 400;
};

struct MinBkResult {
  double value = 0;
  TangentPair pair;  // g-unit
  std::uint64_t seed = 0;
  int samples = 0;
  int line_search_failures = 0;
};

MinBkResult min_bk_defect(const CurvatureData& R, double K, const MinBkOptions& opts = {});

// |R(X,JX,Y,JY) − R(X,Y,X,Y) − R(X,JY,X,JY)| for real tangent vectors (2n each).
double bianchi_check(const CurvatureData& R, const RVec& X, const RVec& Y);

// Real (0,4) Riemann tensor T(A,B,C,D) built from the Kähler components.
double real_riemann(const CurvatureData& R, const RVec& A, const RVec& B, const RVec& C,
                    const RVec& D);

}  // namespace kahlerlab::core
