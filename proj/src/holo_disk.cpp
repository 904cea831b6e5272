#include "kahlerlab/holo_disk.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

namespace kahlerlab::disk {

namespace {
constexpr double kPi = std::numbers::pi;
}

DiskEmbedding::DiskEmbedding(std::vector<CVec> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < 2) fail(ErrorKind::InvalidArgument, "disk needs a linear term");
  if (coeffs_.size() > 9) fail(ErrorKind::InvalidArgument, "disk degree is limited to 8");
  for (const auto& c : coeffs_)
    if (c.size() != coeffs_.front().size() || c.size() == 0)
      fail(ErrorKind::InvalidArgument, "disk coefficients differ in dimension");
}

DiskEmbedding DiskEmbedding::affine(const CVec& a, const CVec& b) { return DiskEmbedding({a, b}); }

CVec DiskEmbedding::operator()(cplx w) const {
  CVec z = coeffs_.back();
  for (size_t k = coeffs_.size() - 1; k-- > 0;) z = (z * w + coeffs_[k]).eval();
  return z;
}

CVec DiskEmbedding::derivative(cplx w) const {
  const size_t m = coeffs_.size();
  CVec z = static_cast<double>(m - 1) * coeffs_[m - 1];
  for (size_t k = m - 1; k-- > 1;) z = (z * w + static_cast<double>(k) * coeffs_[k]).eval();
  return z;
}

DiskEmbedding DiskEmbedding::rotated(double theta) const {
  std::vector<CVec> c = coeffs_;
  for (size_t k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, theta * static_cast<double>(k));
  return DiskEmbedding(std::move(c));
}

DiskEmbedding DiskEmbedding::rescaled(double lambda) const {
  if (!(lambda > 0 && lambda <= 1)) fail(ErrorKind::InvalidArgument, "rescale needs 0 < λ ≤ 1");
  std::vector<CVec> c = coeffs_;
  for (size_t k = 0; k < c.size(); ++k) c[k] *= std::pow(lambda, static_cast<double>(k));
  return DiskEmbedding(std::move(c));
}

void DiskEmbedding::validate(const ComplexChart& chart, int samples) const {
  if (chart.dimension() != dimension())
    fail(ErrorKind::InvalidArgument, "disk and chart differ in dimension");
  const double scale = coeffs_[1].norm();
  for (int i = 0; i <= samples / 4; ++i) {
    const double r = static_cast<double>(i) / (samples / 4);
    const int nt = i == 0 ? 1 : samples;
    for (int t = 0; t < nt; ++t) {
      const cplx w = std::polar(r, 2 * kPi * t / nt);
      if (!(derivative(w).norm() > 1e-12 * std::max(scale, 1e-300)))
        fail(ErrorKind::InvalidArgument, "disk is not immersive");
      if (!chart.contains((*this)(w))) fail(ErrorKind::DomainExceeded, "disk leaves the chart");
    }
  }
  // Injectivity spot check on the boundary grid (non-adjacent pairs).
  std::vector<CVec> ring(samples);
  for (int t = 0; t < samples; ++t) ring[t] = (*this)(std::polar(1.0, 2 * kPi * t / samples));
  for (int a = 0; a < samples; ++a)
    for (int b = a + 2; b < samples; ++b) {
      if (a == 0 && b == samples - 1) continue;
      if (!((ring[a] - ring[b]).norm() > 1e-9 * scale))
        fail(ErrorKind::InvalidArgument, "disk is not injective on the boundary");
    }
}

double area_density(const core::HermitianMetricField& g, const DiskEmbedding& disk, cplx w) {
  return hermitian_norm2(g(disk(w)), disk.derivative(w));
}

namespace {

// ∫₀¹ log r · density · r dr per angle, Gauss rule with weight −log r.
double log_moment_impl(const core::HermitianMetricField& g, const DiskEmbedding& disk, int n_r,
                       int n_theta) {
  const QuadratureRule q = gauss_log(n_r);
  double total = 0;
  for (int t = 0; t < n_theta; ++t) {
    const double th = 2 * kPi * t / n_theta;
    double s = 0;
    for (int k = 0; k < n_r; ++k) {
      const double r = q.nodes[k];
      s += q.weights[k] * r * area_density(g, disk, std::polar(r, th));
    }
    total -= s;
  }
  return (2 / kPi) * total * (2 * kPi / n_theta);
}

}  // namespace

double log_moment(const core::HermitianMetricField& g, const DiskEmbedding& disk,
                  const QuadratureGrid& grid) {
  if (grid.n_r < 1 || grid.n_theta < 1) fail(ErrorKind::InvalidArgument, "empty quadrature grid");
  return log_moment_impl(g, disk, grid.n_r, grid.n_theta);
}

namespace {

struct BoundaryValues {
  std::vector<double> value, err;
};

BoundaryValues boundary_values(const DiskEmbedding& disk, const CVec& p, double K,
                               const DistanceStrategy& dist, int n_b, double radius) {
  BoundaryValues out;
  out.value.resize(n_b);
  out.err.resize(n_b);
  std::vector<std::exception_ptr> errors(n_b);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < n_b; ++k) {
    try {
      const DistanceValue dv = dist(p, disk(std::polar(radius, 2 * kPi * k / n_b)));
      out.value[k] = model::dK_transform(dv.d, K);
      // d(d_K)/dd ≈ 2d for the error propagation.
      out.err[k] = 2 * dv.d * dv.err;
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

double mean(const std::vector<double>& v, int stride = 1) {
  double s = 0;
  int c = 0;
  for (size_t k = 0; k < v.size(); k += stride, ++c) s += v[k];
  return s / c;
}

}  // namespace

ComparisonReport comparison_defect(const core::HermitianMetricField& g, const DiskEmbedding& disk,
                                   const CVec& p, double K, const DistanceStrategy& dist,
                                   QuadratureGrid grid) {
  if (!dist) fail(ErrorKind::InvalidArgument, "missing distance strategy");
  if (p.size() != disk.dimension()) fail(ErrorKind::InvalidArgument, "base point dimension");
  if (grid.n_b < 4 || grid.n_b % 2) fail(ErrorKind::InvalidArgument, "n_b must be even ≥ 4");
  ComparisonReport rep;
  // Finer boundary sampling when p sits close to the disk image.
  double near = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 8; ++i)
    for (int t = 0; t < 16; ++t)
      near = std::min(near, (disk(std::polar(i / 8.0, 2 * kPi * t / 16)) - p).norm());
  if (near < 0.05) {
    grid.n_b *= 2;
    rep.boundary_refined = true;
  }

  const DistanceValue c = dist(p, disk(0));
  rep.center_term = model::dK_transform(c.d, K);
  const BoundaryValues b = boundary_values(disk, p, K, dist, grid.n_b, 1.0);
  rep.boundary_mean = mean(b.value);
  rep.log_moment = log_moment_impl(g, disk, grid.n_r, grid.n_theta);
  rep.defect = rep.center_term - rep.log_moment - rep.boundary_mean;
  rep.boundary_points = grid.n_b;

  const double coarse_b = mean(b.value, 2);
  const double coarse_lm = log_moment_impl(g, disk, std::max(1, grid.n_r / 2), grid.n_theta);
  rep.error_estimate = std::abs(rep.boundary_mean - coarse_b) + std::abs(rep.log_moment - coarse_lm) +
                       2 * c.d * c.err + mean(b.err);
  return rep;
}

AnnulusReport annulus_defect(const core::HermitianMetricField& g, const DiskEmbedding& disk,
                             const CVec& p, double K, double eps, const DistanceStrategy& dist,
                             QuadratureGrid grid) {
  if (!(eps > 0 && eps < 0.1)) fail(ErrorKind::InvalidArgument, "annulus needs 0 < ε < 1/10");
  if (grid.n_b < 4 || grid.n_b % 2) fail(ErrorKind::InvalidArgument, "n_b must be even ≥ 4");
  AnnulusReport rep;
  const BoundaryValues inner = boundary_values(disk, p, K, dist, grid.n_b, eps);
  const BoundaryValues outer = boundary_values(disk, p, K, dist, grid.n_b, std::exp(-eps));
  const double ring = 0.25 * 2 * kPi * (mean(inner.value) - mean(outer.value));

  // Radial panels: [0, ε], geometric panels on [ε, e^{−ε}], then [e^{−ε}, 1].
  const int nq = std::max(8, grid.n_r);
  const double re = std::exp(-eps);
  std::vector<std::pair<double, double>> panels;
  for (double a = eps; a < re;) {
    const double b = std::min(2 * a, re);
    panels.push_back({a, b});
    a = b;
  }
  const QuadratureRule glog = gauss_log(nq);
  double fint = 0, tail = 0;
  for (int t = 0; t < grid.n_theta; ++t) {
    const double th = 2 * kPi * t / grid.n_theta;
    auto F = [&](double r) { return area_density(g, disk, std::polar(r, th)) * r; };
    const QuadratureRule q0 = gauss_legendre(nq, 0, eps);
    double I0 = 0, Ilog0 = 0;
    for (int k = 0; k < nq; ++k) I0 += q0.weights[k] * F(q0.nodes[k]);
    // ∫₀^ε −log r·F = ε[−log ε·∫₀¹F(εt)dt + ∫₀¹ −log t·F(εt)dt]
    for (int k = 0; k < nq; ++k) Ilog0 += glog.weights[k] * F(eps * glog.nodes[k]);
    Ilog0 = -std::log(eps) * I0 + eps * Ilog0;
    double Imid = 0, Imid_log = 0;
    for (const auto& [a, b] : panels) {
      const QuadratureRule q = gauss_legendre(nq, a, b);
      for (int k = 0; k < nq; ++k) {
        const double f = F(q.nodes[k]);
        Imid += q.weights[k] * f;
        Imid_log += q.weights[k] * std::log(q.nodes[k]) * f;
      }
    }
    const QuadratureRule q1 = gauss_legendre(nq, re, 1);
    double Iout_log = 0;
    for (int k = 0; k < nq; ++k) Iout_log += q1.weights[k] * std::log(q1.nodes[k]) * F(q1.nodes[k]);

    fint += (std::log(eps) + eps) * I0 + Imid_log + eps * Imid;
    // f_ε − log r on each piece.
    tail += (std::log(eps) + eps) * I0 + Ilog0 + eps * Imid - Iout_log;
  }
  const double dth = 2 * kPi / grid.n_theta;
  fint *= dth;
  tail *= dth;
  rep.value = ring - fint;
  rep.tail = tail;
  const double coarse = 0.25 * 2 * kPi * (mean(inner.value, 2) - mean(outer.value, 2));
  rep.error_estimate = std::abs(ring - coarse) + 0.25 * 2 * kPi * (mean(inner.err) + mean(outer.err));
  return rep;
}

DiskEmbedding violation_disk(const CVec& p, const core::TangentPair& pair, double eps1,
                             double eps2) {
  if (!(eps1 > 0) || !(eps2 > 0)) fail(ErrorKind::InvalidArgument, "ε must be positive");
  if (pair.X.size() != p.size() || pair.Y.size() != p.size())
    fail(ErrorKind::InvalidArgument, "tangent pair dimension");
  return DiskEmbedding({CVec(p + eps2 * pair.Y), CVec(eps1 * pair.X)});
}

double asymptotic_defect(double Rprime, double eps1, double eps2) {
  if (!(eps1 > 0) || !(eps2 > 0) || !(eps2 < 1)) fail(ErrorKind::InvalidArgument, "need 0 < ε");
  return (1.0 / 3.0) * eps1 * eps1 * eps2 * eps2 * std::log(eps2) * Rprime;
}

double leading_order_defect(double Rprime, double eps1, double eps2) {
  return -(1.0 / 6.0) * eps1 * eps1 * eps2 * eps2 * Rprime;
}

TorsionTensor::TorsionTensor(int n) : n_(n), t_(static_cast<size_t>(n) * n * n, cplx(0)) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "torsion needs n ≥ 2");
}

void TorsionTensor::set(int i, int j, int k, cplx v) {
  if (j == k) fail(ErrorKind::InvalidArgument, "torsion is antisymmetric in its last two slots");
  if (i < 0 || j < 0 || k < 0 || i >= n_ || j >= n_ || k >= n_)
    fail(ErrorKind::InvalidArgument, "torsion index out of range");
  t_[(i * n_ + j) * n_ + k] = v;
  t_[(i * n_ + k) * n_ + j] = -v;
}

cplx TorsionTensor::contract(const CVec& a, const CVec& b) const {
  cplx s = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) s += std::conj(a[i]) * b[j] * (*this)(i, j, k) * a[k];
  return s;
}

core::HermitianMetricField torsion_metric(const TorsionTensor& T, const ComplexChart& chart) {
  const int n = T.dimension();
  if (chart.dimension() != n) fail(ErrorKind::InvalidArgument, "chart dimension");
  auto G = [T, n](const CVec& z) {
    CMat M = CMat::Identity(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int j = 0; j < n; ++j)
          M(a, b) += T(b, j, a) * z[j] + std::conj(T(a, j, b) * z[j]);
    return M;
  };
  // Positivity on the chart, probed on a coarse sample.
  const double R = chart.shape() == ComplexChart::Shape::Ball ? chart.radius() : 0;
  if (std::isfinite(R) && R > 0) {
    for (int s = 0; s < 200; ++s) {
      CVec z(n);
      for (int j = 0; j < n; ++j)
        z[j] = std::polar(R * ((s * 7 + j * 3) % 11) / 11.0 / std::sqrt(n),
                          2 * kPi * ((s * 13 + j * 5) % 17) / 17.0);
      z += chart.center();
      if (!(min_eigenvalue(G(z)) > 1e-10))
        fail(ErrorKind::NonPositiveDefinite, "torsion metric not positive on the chart");
    }
  }
  return core::HermitianMetricField::direct(G, n, "torsion");
}

DiskEmbedding torsion_disk(const CVec& a, const CVec& b, double eps1, double eps2) {
  return DiskEmbedding({CVec(eps2 * b), CVec(eps1 * a)});
}

double torsion_display(const TorsionTensor& T, const CVec& a, const CVec& b, double eps1,
                       double eps2) {
  return -4 * eps1 * eps1 * eps2 * std::log(eps2 * b.norm()) * T.contract(a, b).real();
}

double torsion_leading_defect(const TorsionTensor& T, const CVec& a, const CVec& b, double eps1,
                              double eps2) {
  return 2 * eps1 * eps1 * eps2 * T.contract(a, b).real();
}

}  // namespace kahlerlab::disk
