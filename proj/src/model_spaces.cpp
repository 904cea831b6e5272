#include "kahlerlab/model_spaces.hpp"

#include <cmath>
#include <numbers>

namespace kahlerlab::model {

namespace {

constexpr double kFlatCutoff = 1e-14;

// (2/c)·log(1 + (c/4)s), evaluated stably for small c·s.
double model_potential_radial(double c, double s) {
  if (std::abs(c) < kFlatCutoff) return 0.5 * s;
  return (2.0 / c) * std::log1p(0.25 * c * s);
}

}  // namespace

ComplexChart ModelSpace::chart() const {
  if (K < 0) return ComplexChart::ball(n, std::sqrt(2.0 / -K));
  return ComplexChart::whole(n);
}

core::ScalarField ModelSpace::potential() const {
  const double cc = c();
  std::vector<Singularity> sing;
  return core::ScalarField(
      [cc](const CVec& z) { return model_potential_radial(cc, z.squaredNorm()); },
      "model(K=" + std::to_string(K) + ")", sing);
}

core::HermitianMetricField ModelSpace::metric(double h) const {
  return core::HermitianMetricField::from_potential(potential(), n, h);
}

CMat ModelSpace::metric_at(const CVec& z) const {
  const double a = 0.25 * c();
  const double u = 1 + a * z.squaredNorm();
  if (!(u > 0)) fail(ErrorKind::DomainExceeded, "point outside the model chart");
  CMat G = CMat::Identity(n, n) / u;
  G -= (a / (u * u)) * (z.conjugate() * z.transpose());
  return G;
}

core::HermitianMetricField ModelSpace::closed_form_metric() const {
  const ModelSpace self = *this;
  return core::HermitianMetricField::direct([self](const CVec& z) { return self.metric_at(z); },
                                            n, "model(K=" + std::to_string(K) + ")/closed");
}

core::CurvatureTensor ModelSpace::curvature_at(const CVec& z) const {
  const CMat G = metric_at(z);
  core::CurvatureTensor R(n);
  const double s = -0.5 * c();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) R(i, j, k, l) = s * (G(i, j) * G(k, l) + G(i, l) * G(k, j));
  return R;
}

double dK_transform(double d, double K, double margin) {
  if (!(d >= 0)) fail(ErrorKind::InvalidArgument, "distance must be nonnegative");
  if (K == 0) return d * d;
  const double x = d * std::sqrt(0.5 * std::abs(K));
  if (K > 0) {
    const double cap = std::numbers::pi / std::sqrt(2 * K) - margin;
    if (!(d < cap)) fail(ErrorKind::DomainExceeded, "distance beyond π/√(2K) − margin");
    const double s = std::sin(0.5 * x);
    return -(4.0 / K) * std::log1p(-2 * s * s);
  }
  double lc;
  if (x < 20) {
    const double s = std::sinh(0.5 * x);
    lc = std::log1p(2 * s * s);
  } else {
    lc = x + std::log1p(std::exp(-2 * x)) - std::numbers::ln2;
  }
  return (4.0 / -K) * lc;
}

double model_distance(double K, const CVec& z1, const CVec& z2) {
  if (z1.size() != z2.size()) fail(ErrorKind::InvalidArgument, "points differ in dimension");
  const double c = 2 * K;
  if (std::abs(c) < kFlatCutoff) return (z1 - z2).norm();
  const double sc = std::sqrt(std::abs(c));
  const CVec a = 0.5 * sc * z1, b = 0.5 * sc * z2;
  double L = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = i + 1; j < a.size(); ++j) L += std::norm(a[i] * b[j] - a[j] * b[i]);
  const double diff2 = (a - b).squaredNorm();
  if (c > 0) {
    const cplx ip = 1.0 + b.dot(a);  // 1 + Σ a_i conj(b_i)
    return (2 / sc) * std::atan2(std::sqrt(diff2 + L), std::abs(ip));
  }
  const double na = 1 - a.squaredNorm(), nb = 1 - b.squaredNorm();
  if (!(na > 0) || !(nb > 0)) fail(ErrorKind::DomainExceeded, "point outside the model ball");
  return (2 / sc) * std::asinh(std::sqrt(std::max(0.0, diff2 - L)) / std::sqrt(na * nb));
}

ConeSurface make_cone(double alpha) {
  if (!(alpha < 1)) fail(ErrorKind::InvalidArgument, "cone parameter must satisfy α < 1");
  return ConeSurface{alpha};
}

double ConeSurface::geodesic_radius(double r) const { return std::pow(r, beta()) / beta(); }

double ConeSurface::chart_radius(double rho) const { return std::pow(beta() * rho, 1 / beta()); }

core::ScalarField ConeSurface::potential() const {
  const double b = beta();
  Singularity apex{CVec::Zero(1), 0.0};
  return core::ScalarField(
      [b](const CVec& z) { return std::pow(std::norm(z[0]), b) / (2 * b * b); },
      "cone(α=" + std::to_string(alpha) + ")", {apex});
}

core::HermitianMetricField ConeSurface::metric() const {
  const double a = alpha;
  Singularity apex{CVec::Zero(1), 0.0};
  return core::HermitianMetricField::direct(
      [a](const CVec& z) {
        CMat G(1, 1);
        G(0, 0) = std::pow(std::norm(z[0]), -a);
        return G;
      },
      1, "cone(α=" + std::to_string(alpha) + ")", {apex});
}

PolarPoint to_polar(const CVec& z) {
  if (z.size() != 1) fail(ErrorKind::InvalidArgument, "cone points are one-dimensional");
  return {std::abs(z[0]), std::arg(z[0])};
}

double cone_distance(const ConeSurface& cone, PolarPoint p1, PolarPoint p2) {
  if (!(p1.r >= 0) || !(p2.r >= 0)) fail(ErrorKind::InvalidArgument, "negative radius");
  const double r1 = cone.geodesic_radius(p1.r), r2 = cone.geodesic_radius(p2.r);
  double dt = std::remainder(p1.theta - p2.theta, 2 * std::numbers::pi);
  const double psi = std::min(cone.beta() * std::abs(dt), std::numbers::pi);
  // 2ρ₁ρ₂(1 − cos ψ) = 4ρ₁ρ₂ sin²(ψ/2) avoids cancellation for nearby points.
  const double s = std::sin(0.5 * psi);
  return std::sqrt((r1 - r2) * (r1 - r2) + 4 * r1 * r2 * s * s);
}

ConeSurface orbifold_cone(int k) {
  if (k < 2) fail(ErrorKind::InvalidArgument, "orbifold order must be at least 2");
  return ConeSurface{1.0 - 1.0 / k};
}

PolarPoint orbifold_chart_point(int k, cplx w) {
  if (k < 2) fail(ErrorKind::InvalidArgument, "orbifold order must be at least 2");
  return {std::pow(std::abs(w) / k, k), k * std::arg(w)};
}

QuotientData round_quotient(int n) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "link quotient needs n ≥ 2");
  return QuotientData{n, 1.0, {}};
}

double link_quotient_distance(const QuotientData& q, const CVec& s1, const CVec& s2) {
  if (s1.size() != q.n || s2.size() != q.n)
    fail(ErrorKind::InvalidArgument, "homogeneous vectors have wrong dimension");
  if (!q.round() || q.delta != 1.0)
    fail(ErrorKind::Unsupported, "link distance is only implemented for the round case");
  const double n1 = s1.norm(), n2 = s2.norm();
  if (!(n1 > 0) || !(n2 > 0)) fail(ErrorKind::InvalidArgument, "zero homogeneous vector");
  const CVec u = s1 / n1, v = s2 / n2;
  const double c = std::abs(v.dot(u));
  const double s = std::sqrt(std::max(0.0, (u - v.dot(u) * v).squaredNorm()));
  return std::atan2(s, c);
}

double quotient_potential(const QuotientData& q, const CVec& zeta) {
  if (zeta.size() != q.n - 1) fail(ErrorKind::InvalidArgument, "chart point has wrong dimension");
  double v = 0.5 * q.delta * std::log1p(zeta.squaredNorm());
  if (q.log_H) v += q.log_H(zeta);
  return v;
}

CVec affine_chart(const CVec& s, int* pivot) {
  Eigen::Index p = 0;
  s.cwiseAbs().maxCoeff(&p);
  if (!(std::abs(s[p]) > 0)) fail(ErrorKind::InvalidArgument, "zero homogeneous vector");
  CVec z(s.size() - 1);
  for (Eigen::Index i = 0, k = 0; i < s.size(); ++i)
    if (i != p) z[k++] = s[i] / s[p];
  if (pivot) *pivot = static_cast<int>(p);
  return z;
}

}  // namespace kahlerlab::model
