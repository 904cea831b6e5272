#pragma once

#include <functional>

#include "kahlerlab/chart.hpp"
#include "kahlerlab/kahler.hpp"

namespace kahlerlab::model {

// M_K: constant holomorphic sectional curvature 2K, c = 2K (curvature −c/2(gg+gg)).
struct ModelSpace {
  double K = 0;
  int n = 1;

  double c() const { return 2 * K; }
  ComplexChart chart() const;
  // ω-potential (2/c)·log(1 + (c/4)|z|²); |z|²/2 when K = 0.
  core::ScalarField potential() const;
  core::HermitianMetricField metric(double h = 1e-3) const;  // from the potential
  core::HermitianMetricField closed_form_metric() const;
  CMat metric_at(const CVec& z) const;
  core::CurvatureTensor curvature_at(const CVec& z) const;
};

// d ↦ d_K(d): antiderivative-of-antiderivative of the model Jacobi function.
double dK_transform(double d, double K, double margin = 1e-9);
double model_distance(double K, const CVec& z1, const CVec& z2);

// Flat cone of total angle 2π(1 − α) in the chart (r, θ) with metric r^{−2α}|dz|².
struct ConeSurface {
  double alpha = 0;

  double beta() const { return 1 - alpha; }
  double geodesic_radius(double r) const;  // ρ = r^{1−α}/(1−α)
  double chart_radius(double rho) const;
  core::ScalarField potential() const;  // ρ²/2 = r^{2−2α}/(2(1−α)²)
  core::HermitianMetricField metric() const;
};

struct PolarPoint {
  double r = 0;
  double theta = 0;
};

ConeSurface make_cone(double alpha);
double cone_distance(const ConeSurface& cone, PolarPoint p1, PolarPoint p2);
PolarPoint to_polar(const CVec& z);

// ℂ/ℤ_k as the cone α = 1 − 1/k; a lift w ∈ ℂ maps to the cone chart by z = (w/k)^k.
ConeSurface orbifold_cone(int k);
PolarPoint orbifold_chart_point(int k, cplx w);

// Link quotient of ℂⁿ\{0} with h = (1 + |ζ|²)^δ·H(ζ)² on the affine chart ζ.
struct QuotientData {
  int n = 2;  // ambient ℂⁿ, base ℂP^{n−1}
  double delta = 1;
  // log of the chart factor H; the round metric has H ≡ 1.
  std::function<double(const CVec&)> log_H;
  bool round() const { return !log_H; }
};

QuotientData round_quotient(int n);
// Distance on the base between the images of two nonzero homogeneous vectors.
double link_quotient_distance(const QuotientData& q, const CVec& s1, const CVec& s2);
// ½·log h in the chart ζ (homogeneous (1, ζ)).
double quotient_potential(const QuotientData& q, const CVec& zeta);
// Affine chart coordinates of s, dividing by the largest coordinate.
CVec affine_chart(const CVec& s, int* pivot = nullptr);

}  // namespace kahlerlab::model
