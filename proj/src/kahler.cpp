#include "kahlerlab/kahler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "kahlerlab/finite_difference.hpp"

namespace kahlerlab::core {

ScalarField::ScalarField(Fn f, std::string name, std::vector<Singularity> singular)
    : f_(std::move(f)), name_(std::move(name)), singular_(std::move(singular)) {}

double ScalarField::clearance(const CVec& z) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& s : singular_) d = std::min(d, (z - s.center).norm() - s.radius);
  return d;
}

namespace {

// Stencils reach √2·h in the worst diagonal direction.
void require_clearance(double clearance, double h, const std::string& what) {
  if (clearance <= 1.5 * h)
    fail(ErrorKind::SingularityTooClose,
         what + ": stencil of step " + std::to_string(h) + " reaches a singular set");
}

CMat levi_from_hessian(const fd::RealDerivatives<double>& D, int n) {
  CMat L(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) L(i, j) = fd::d_holo_antiholo(D, i, j);
  return 0.5 * (L + L.adjoint());
}

}  // namespace

CMat levi_form(const ScalarField& phi, const CVec& z, double h) {
  if (!(h > 0)) fail(ErrorKind::InvalidArgument, "finite-difference step must be positive");
  require_clearance(phi.clearance(z), h, phi.name());
  const auto D = fd::real_derivatives<double>(phi, z, h);
  return levi_from_hessian(D, static_cast<int>(z.size()));
}

CMat metric_from_potential(const ScalarField& phi, const CVec& z, double h) {
  if (!(h >= 1e-6 && h <= 1e-2)) fail(ErrorKind::InvalidArgument, "step must lie in [1e-6, 1e-2]");
  const CMat L = levi_form(phi, z, h);
  const double lmin = min_eigenvalue(L);
  if (!(lmin > 0))
    fail(ErrorKind::NonPositiveDefinite, phi.name() + ": Levi form eigenvalue " + std::to_string(lmin));
  return L;
}

HermitianMetricField HermitianMetricField::from_potential(ScalarField phi, int n, double h) {
  if (!phi) fail(ErrorKind::InvalidArgument, "empty potential");
  if (n < 1) fail(ErrorKind::InvalidArgument, "dimension must be positive");
  HermitianMetricField m;
  m.n_ = n;
  m.h_ = h;
  m.name_ = phi.name();
  m.singular_ = phi.singular();
  m.phi_ = std::move(phi);
  return m;
}

HermitianMetricField HermitianMetricField::direct(DirectFn g, int n, std::string name,
                                                  std::vector<Singularity> singular) {
  if (!g) fail(ErrorKind::InvalidArgument, "empty metric function");
  if (n < 1) fail(ErrorKind::InvalidArgument, "dimension must be positive");
  HermitianMetricField m;
  m.n_ = n;
  m.name_ = std::move(name);
  m.g_ = std::move(g);
  m.singular_ = std::move(singular);
  return m;
}

const ScalarField& HermitianMetricField::potential() const {
  if (!phi_) fail(ErrorKind::Unsupported, "metric '" + name_ + "' has no potential");
  return phi_;
}

double HermitianMetricField::clearance(const CVec& z) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& s : singular_) d = std::min(d, (z - s.center).norm() - s.radius);
  return d;
}

CMat HermitianMetricField::unchecked(const CVec& z) const {
  if (phi_) {
    const auto D = fd::real_derivatives<double>(phi_, z, h_);
    return 2.0 * levi_from_hessian(D, n_);
  }
  return g_(z);
}

CMat HermitianMetricField::operator()(const CVec& z) const {
  if (z.size() != n_) fail(ErrorKind::InvalidArgument, "point has wrong dimension");
  if (phi_)
    require_clearance(clearance(z), h_, name_);
  else if (clearance(z) <= 0)
    fail(ErrorKind::SingularityTooClose, name_ + ": evaluated on a singular set");
  CMat G = unchecked(z);
  const double lmin = min_eigenvalue(G);
  if (!(lmin >= 1e-10))
    fail(ErrorKind::NonPositiveDefinite,
         name_ + ": metric eigenvalue " + std::to_string(lmin) + " below 1e-10");
  return G;
}

HermitianMetricField HermitianMetricField::scaled(double lambda2) const {
  if (!(lambda2 > 0)) fail(ErrorKind::InvalidArgument, "scale must be positive");
  if (phi_) {
    ScalarField p = phi_;
    ScalarField sp([p, lambda2](const CVec& z) { return lambda2 * p(z); },
                   phi_.name() + "*scaled", phi_.singular());
    return from_potential(sp, n_, h_);
  }
  DirectFn g = g_;
  return direct([g, lambda2](const CVec& z) -> CMat { return lambda2 * g(z); }, n_,
                name_ + "*scaled", singular_);
}

double CurvatureTensor::max_abs() const {
  double m = 0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

CurvatureData curvature_tensor(const HermitianMetricField& g, const CVec& z,
                               const CurvatureOptions& opts) {
  const int n = g.dimension();
  if (z.size() != n) fail(ErrorKind::InvalidArgument, "point has wrong dimension");
  const double h = opts.step;
  double reach = 1.5 * h;
  HermitianMetricField inner = g;
  if (g.has_potential()) {
    inner = HermitianMetricField::from_potential(g.potential(), n, h);
    reach = 3.0 * h;
  }
  if (g.clearance(z) <= reach)
    fail(ErrorKind::SingularityTooClose, "curvature stencil reaches a singular set");

  auto Gf = [&](const CVec& w) -> CMat { return inner.unchecked(w); };
  const auto D = fd::real_derivatives<CMat>(Gf, z, h);

  CurvatureData out;
  out.point = z;
  out.metric = 0.5 * (D.value + D.value.adjoint());
  if (!(min_eigenvalue(out.metric) >= 1e-10))
    fail(ErrorKind::NonPositiveDefinite, "metric is not positive definite at curvature point");
  const CMat Ginv = out.metric.inverse();

  std::vector<CMat> dG(n);
  for (int k = 0; k < n; ++k) dG[k] = fd::d_holo(D, k);

  out.R = CurvatureTensor(n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      const CMat block = 2.0 * (fd::d_holo_antiholo(D, k, l) - dG[k] * Ginv * dG[l].adjoint());
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.R(i, j, k, l) = block(i, j);
    }
  }

  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.kahler_defect = std::max(out.kahler_defect, std::abs(dG[k](i, j) - dG[i](k, j)));

  double sym = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const cplx r = out.R(i, j, k, l);
          sym = std::max({sym, std::abs(r - out.R(k, j, i, l)), std::abs(r - out.R(i, l, k, j)),
                          std::abs(std::conj(r) - out.R(j, i, l, k))});
        }
  out.symmetry_defect = sym;

  out.ricci = CMat::Zero(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      cplx s = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += Ginv(j, i) * out.R(i, j, k, l);
      out.ricci(k, l) = -s;
    }
  cplx sc = 0;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) sc += Ginv(l, k) * out.ricci(k, l);
  out.scalar = sc.real();
  return out;
}

TangentPair normalized(const CMat& G, const TangentPair& pair) {
  const double nx = hermitian_norm2(G, pair.X), ny = hermitian_norm2(G, pair.Y);
  if (!(nx > 0) || !(ny > 0)) fail(ErrorKind::InvalidArgument, "tangent vector is zero");
  return {pair.X / std::sqrt(nx), pair.Y / std::sqrt(ny)};
}

namespace {

cplx contract(const CurvatureTensor& R, const CVec& a, const CVec& b, const CVec& c,
              const CVec& d) {
  const int n = R.dimension();
  cplx s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cplx ab = a[i] * std::conj(b[j]);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += R(i, j, k, l) * ab * c[k] * std::conj(d[l]);
    }
  return s;
}

}  // namespace

double bisectional(const CurvatureData& R, const TangentPair& pair) {
  if (pair.X.size() != R.R.dimension() || pair.Y.size() != R.R.dimension())
    fail(ErrorKind::InvalidArgument, "tangent vectors have wrong dimension");
  return -contract(R.R, pair.X, pair.X, pair.Y, pair.Y).real();
}

double bk_defect(const CurvatureData& R, double K, const TangentPair& pair) {
  const double nx = hermitian_norm2(R.metric, pair.X), ny = hermitian_norm2(R.metric, pair.Y);
  const double cross = std::norm(hermitian_pair(R.metric, pair.X, pair.Y));
  return bisectional(R, pair) - K * (nx * ny + cross);
}

namespace {

// Curvature in a g-orthonormal frame, as a dense n⁴ array.
struct FrameProblem {
  int n;
  double K;
  std::vector<cplx> Rf;
  cplx& at(int a, int b, int c, int d) { return Rf[((a * n + b) * n + c) * n + d]; }
  cplx at(int a, int b, int c, int d) const { return Rf[((a * n + b) * n + c) * n + d]; }

  double value(const CVec& x, const CVec& y) const {
    cplx s = 0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            s += at(a, b, c, d) * x[a] * std::conj(x[b]) * y[c] * std::conj(y[d]);
    const cplx ov = x.dot(y);  // Σ conj(x_a) y_a
    return -s.real() - K * (x.squaredNorm() * y.squaredNorm() + std::norm(ov));
  }

  void gradient(const CVec& x, const CVec& y, CVec& gx, CVec& gy) const {
    gx = CVec::Zero(n);
    gy = CVec::Zero(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            const cplx r = at(a, b, c, d);
            gx[b] -= r * x[a] * y[c] * std::conj(y[d]);
            gy[d] -= r * x[a] * std::conj(x[b]) * y[c];
          }
    const cplx s = y.dot(x);  // Σ x_a conj(y_a)
    gx -= K * (x * y.squaredNorm() + s * y);
    gy -= K * (y * x.squaredNorm() + std::conj(s) * x);
    gx *= 2.0;
    gy *= 2.0;
  }
};

CVec project_tangent(const CVec& g, const CVec& x) { return g - x.dot(g).real() * x; }

}  // namespace

MinBkResult min_bk_defect(const CurvatureData& R, double K, const MinBkOptions& opts) {
  const int n = R.R.dimension();
  if (opts.samples < 1000)
    fail(ErrorKind::InvalidArgument, "min_bk_defect needs at least 1000 sampled pairs");
  // Frame E with Eᵀ G Ē = I: Ḡ = L L†, E = L^{-†}.
  Eigen::LLT<CMat> llt(R.metric.conjugate());
  if (llt.info() != Eigen::Success) fail(ErrorKind::NonPositiveDefinite, "metric not PD");
  const CMat E = CMat(llt.matrixL()).adjoint().inverse();

  FrameProblem P{n, K, std::vector<cplx>(static_cast<size_t>(n) * n * n * n, cplx(0))};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          cplx s = 0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                  s += R.R(i, j, k, l) * E(i, a) * std::conj(E(j, b)) * E(k, c) *
                       std::conj(E(l, d));
          P.at(a, b, c, d) = s;
        }

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> N01;
  auto random_unit = [&]() {
    CVec v(n);
    for (int a = 0; a < n; ++a) v[a] = cplx(N01(rng), N01(rng));
    return CVec(v / v.norm());
  };

  struct Cand {
    double f;
    CVec x, y;
  };
  std::vector<Cand> cands;
  cands.reserve(opts.samples);
  for (int s = 0; s < opts.samples; ++s) {
    CVec x = random_unit(), y = random_unit();
    cands.push_back({P.value(x, y), x, y});
  }
  const int starts = std::min<int>(opts.refine_starts, static_cast<int>(cands.size()));
  std::partial_sort(cands.begin(), cands.begin() + starts, cands.end(),
                    [](const Cand& a, const Cand& b) { return a.f < b.f; });

  MinBkResult best;
  best.value = std::numeric_limits<double>::infinity();
  int failures = 0;
  for (int s = 0; s < starts; ++s) {
    CVec x = cands[s].x, y = cands[s].y;
    double f = cands[s].f;
    double t = 0.5;
    for (int it = 0; it < opts.max_iter; ++it) {
      CVec gx, gy;
      P.gradient(x, y, gx, gy);
      gx = project_tangent(gx, x);
      gy = project_tangent(gy, y);
      const double g2 = gx.squaredNorm() + gy.squaredNorm();
      if (g2 < 1e-22) break;
      bool accepted = false;
      t = std::min(1.0, 4.0 * t);
      while (t > 1e-14) {
        CVec xn = x - t * gx, yn = y - t * gy;
        xn /= xn.norm();
        yn /= yn.norm();
        const double fn = P.value(xn, yn);
        if (fn <= f - 1e-4 * t * g2) {
          x = xn;
          y = yn;
          f = fn;
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) {
        // A stalled search at a near-stationary point is convergence, not failure.
        if (g2 > 1e-14 && ++failures >= 50)
          fail(ErrorKind::NonConvergence, "min_bk_defect line search failed 50 times");
        break;
      }
    }
    if (f < best.value) {
      best.value = f;
      best.pair = {E * x, E * y};
    }
  }
  best.seed = opts.seed;
  best.samples = opts.samples;
  best.line_search_failures = failures;
  return best;
}

double real_riemann(const CurvatureData& R, const RVec& A, const RVec& B, const RVec& C,
                    const RVec& D) {
  const CVec a = to_complex(A), b = to_complex(B), c = to_complex(C), d = to_complex(D);
  return 0.5 * (contract(R.R, a, b, c, d) - contract(R.R, b, a, c, d)).real();
}

double bianchi_check(const CurvatureData& R, const RVec& X, const RVec& Y) {
  const int m = 2 * R.R.dimension();
  if (X.size() != m || Y.size() != m) fail(ErrorKind::InvalidArgument, "wrong real dimension");
  auto J = [](const RVec& v) {
    RVec w(v.size());
    for (Eigen::Index k = 0; k < v.size() / 2; ++k) {
      w[2 * k] = -v[2 * k + 1];
      w[2 * k + 1] = v[2 * k];
    }
    return w;
  };
  const RVec JX = J(X), JY = J(Y);
  return std::abs(real_riemann(R, X, JX, Y, JY) - real_riemann(R, X, Y, X, Y) -
                  real_riemann(R, X, JY, X, JY));
}

}  // namespace kahlerlab::core
