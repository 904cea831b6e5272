#include "kahlerlab/chart.hpp"

#include <algorithm>
#include <cmath>

namespace kahlerlab {

ComplexChart ComplexChart::ball(int n, double radius, CVec center) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "chart dimension must be positive");
  if (!(radius > 0)) fail(ErrorKind::InvalidArgument, "chart radius must be positive");
  ComplexChart c;
  c.n_ = n;
  c.shape_ = Shape::Ball;
  c.radius_ = radius;
  c.center_ = center.size() == 0 ? CVec(CVec::Zero(n)) : center;
  if (c.center_.size() != n) fail(ErrorKind::InvalidArgument, "chart center has wrong dimension");
  return c;
}

ComplexChart ComplexChart::box(const RVec& lo, const RVec& hi) {
  if (lo.size() != hi.size() || lo.size() == 0 || lo.size() % 2 != 0)
    fail(ErrorKind::InvalidArgument, "box chart needs 2n lower and upper bounds");
  for (Eigen::Index a = 0; a < lo.size(); ++a)
    if (!(hi[a] > lo[a])) fail(ErrorKind::InvalidArgument, "box chart has empty extent");
  ComplexChart c;
  c.n_ = static_cast<int>(lo.size() / 2);
  c.shape_ = Shape::Box;
  c.lo_ = lo;
  c.hi_ = hi;
  c.center_ = to_complex(0.5 * (lo + hi));
  return c;
}

ComplexChart ComplexChart::whole(int n) {
  return ball(n, std::numeric_limits<double>::infinity());
}

ComplexChart& ComplexChart::exclude(Singularity s) {
  if (s.center.size() != n_) fail(ErrorKind::InvalidArgument, "excluded set has wrong dimension");
  excluded_.push_back(std::move(s));
  return *this;
}

double ComplexChart::boundary_margin(const CVec& z) const {
  if (shape_ == Shape::Ball) {
    if (std::isinf(radius_)) return std::numeric_limits<double>::infinity();
    return radius_ - (z - center_).norm();
  }
  const RVec x = to_real(z);
  double m = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < x.size(); ++a) m = std::min({m, x[a] - lo_[a], hi_[a] - x[a]});
  return m;
}

double ComplexChart::distance_to_excluded(const CVec& z) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& s : excluded_) d = std::min(d, (z - s.center).norm() - s.radius);
  return d;
}

bool ComplexChart::contains(const CVec& z) const {
  if (z.size() != n_) return false;
  for (Eigen::Index k = 0; k < z.size(); ++k)
    if (!std::isfinite(z[k].real()) || !std::isfinite(z[k].imag())) return false;
  return boundary_margin(z) > 0 && distance_to_excluded(z) > 0;
}

}  // namespace kahlerlab
