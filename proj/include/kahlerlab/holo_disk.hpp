#pragma once

#include <vector>

#include "kahlerlab/chart.hpp"
#include "kahlerlab/kahler.hpp"
#include "kahlerlab/quadrature.hpp"
#include "kahlerlab/spaces.hpp"

namespace kahlerlab::disk {

// Polynomial holomorphic disk i(w) = Σ_k c_k w^k on the closed unit disk.
class DiskEmbedding {
 public:
  DiskEmbedding() = default;
  explicit DiskEmbedding(std::vector<CVec> coeffs);
  static DiskEmbedding affine(const CVec& a, const CVec& b);

  int dimension() const { return static_cast<int>(coeffs_.front().size()); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<CVec>& coefficients() const { return coeffs_; }

  CVec operator()(cplx w) const;
  CVec derivative(cplx w) const;
  // Precomposition with a rotation w ↦ e^{iθ}w.
  DiskEmbedding rotated(double theta) const;
  // Precomposition with w ↦ λw (0 < λ ≤ 1).
  DiskEmbedding rescaled(double lambda) const;

  // Throws unless i is immersive on the closed disk and its image (sampled)
  // stays inside the chart.
  void validate(const ComplexChart& chart, int samples = 64) const;

 private:
  std::vector<CVec> coeffs_;
};

struct QuadratureGrid {
  int n_r = 16;
  int n_theta = 32;
  int n_b = 64;
};

// g(i′(w), i′(w)); the pulled-back area element is density·dx dy.
double area_density(const core::HermitianMetricField& g, const DiskEmbedding& disk, cplx w);

// (2/π)∫ log|w| dA over the disk.
double log_moment(const core::HermitianMetricField& g, const DiskEmbedding& disk,
                  const QuadratureGrid& grid = {});

struct ComparisonReport {
  double defect = 0;
  double error_estimate = 0;
  double center_term = 0;     // d_K(i(0))
  double boundary_mean = 0;   // (1/2π)∫ d_K(i(e^{iθ})) dθ
  double log_moment = 0;
  int boundary_points = 0;
  bool boundary_refined = false;
};

// d²_{K,p}(i(0)) − (2/π)∫log|w| dA − (1/2π)∫ d²_{K,p}(i(e^{iθ})) dθ.
ComparisonReport comparison_defect(const core::HermitianMetricField& g, const DiskEmbedding& disk,
                                   const CVec& p, double K, const DistanceStrategy& dist,
                                   QuadratureGrid grid = {});

struct AnnulusReport {
  double value = 0;  // A(ε)
  double tail = 0;   // ∫ (f_ε − log|w|) dμ
  double error_estimate = 0;
};

// ¼∫(d²(εe^{iθ}) − d²(e^{−ε}e^{iθ}))dθ − ∫ f_ε dμ with the piecewise weight f_ε.
AnnulusReport annulus_defect(const core::HermitianMetricField& g, const DiskEmbedding& disk,
                             const CVec& p, double K, double eps, const DistanceStrategy& dist,
                             QuadratureGrid grid = {});

// i(w) = p + ε₁wX + ε₂Y.
DiskEmbedding violation_disk(const CVec& p, const core::TangentPair& pair, double eps1,
                             double eps2);

// The closed-form expansion as stated for the directed disk:
// (1/3)ε₁²ε₂²·log(ε₂)·R′(X, X̄, Y, Ȳ), with R′ = R − R_K.
double asymptotic_defect(double Rprime, double eps1, double eps2);
// Leading term of the defect for the same disk in the disk coordinate:
// −(1/6)ε₁²ε₂²·R′(X, X̄, Y, Ȳ) (unit X, Y).
double leading_order_defect(double Rprime, double eps1, double eps2);

// Torsion T_{īj k} (antisymmetric in j, k) stored as T[i][j][k].
class TorsionTensor {
 public:
  explicit TorsionTensor(int n);
  int dimension() const { return n_; }
  void set(int i, int j, int k, cplx v);  // also sets (i, k, j) to −v
  cplx operator()(int i, int j, int k) const { return t_[(i * n_ + j) * n_ + k]; }
  // S = Σ ā_i b_j T_{īj k} a_k.
  cplx contract(const CVec& a, const CVec& b) const;

 private:
  int n_;
  std::vector<cplx> t_;
};

// g_{ab̄} = δ_ab + Σ_j T_{b̄ j a} z_j + conj(T_{ā j b}) z̄_j (Hermitian, not Kähler).
core::HermitianMetricField torsion_metric(const TorsionTensor& T, const ComplexChart& chart);

// Disk i(w) = ε₁wa + ε₂b for the torsion study.
DiskEmbedding torsion_disk(const CVec& a, const CVec& b, double eps1, double eps2);
// The closed-form expansion as stated: −4ε₁²ε₂·log(ε₂|b|)·Re S.
double torsion_display(const TorsionTensor& T, const CVec& a, const CVec& b, double eps1,
                       double eps2);
// Leading term in the disk coordinate: 2ε₁²ε₂·Re S.
double torsion_leading_defect(const TorsionTensor& T, const CVec& a, const CVec& b, double eps1,
                              double eps2);

}  // namespace kahlerlab::disk
