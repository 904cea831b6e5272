#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kahlerlab/geodesy.hpp"
#include "kahlerlab/holo_disk.hpp"
#include "kahlerlab/model_spaces.hpp"
#include "kahlerlab/quadrature.hpp"
#include "kahlerlab/spaces.hpp"
#include "support/gen.hpp"

using namespace kahlerlab;
using namespace kahlerlab::disk;
using testsupport::Gen;
using std::numbers::pi;

namespace {

core::HermitianMetricField identity_metric(int n) {
  return core::HermitianMetricField::direct([n](const CVec&) { return CMat(CMat::Identity(n, n)); }, n,
                                            "euclidean");
}

CVec vec2(cplx a, cplx b) {
  CVec v(2);
  v << a, b;
  return v;
}

// A random affine or quadratic disk of size s around c.
DiskEmbedding random_disk(Gen& g, const CVec& c, double s, bool quadratic) {
  std::vector<CVec> coeffs = {c, g.unit(static_cast<int>(c.size())) * s};
  if (quadratic) coeffs.push_back(g.unit(static_cast<int>(c.size())) * (0.3 * s * g.uniform()));
  return DiskEmbedding(coeffs);
}

ErrorKind error_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const LabError& e) {
    return e.kind();
  }
  FAIL("no LabError thrown");
  return ErrorKind::InvalidArgument;
}

void check_reports_equal(const ComparisonReport& a, const ComparisonReport& b, double tol) {
  CHECK(std::abs(a.defect - b.defect) <= tol);
  CHECK(std::abs(a.center_term - b.center_term) <= tol);
  CHECK(std::abs(a.boundary_mean - b.boundary_mean) <= tol);
  CHECK(std::abs(a.log_moment - b.log_moment) <= tol);
  CHECK(std::abs(a.error_estimate - b.error_estimate) <= tol);
}

}  // namespace

TEST_CASE("quadrature rules") {
  const auto gl = gauss_legendre(8, -1, 2);
  for (int k = 0; k < 16; ++k) {
    double s = 0;
    for (size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * std::pow(gl.nodes[i], k);
    CHECK(s == doctest::Approx((std::pow(2.0, k + 1) - std::pow(-1.0, k + 1)) / (k + 1)).epsilon(1e-12));
  }
  // ∫₀¹ x^k (−log x) dx = 1/(k+1)².
  for (int n : {4, 12}) {
    const auto gq = gauss_log(n);
    for (int k = 0; k < 2 * n; ++k) {
      double s = 0;
      for (size_t i = 0; i < gq.nodes.size(); ++i) s += gq.weights[i] * std::pow(gq.nodes[i], k);
      CHECK(s == doctest::Approx(1.0 / ((k + 1) * (k + 1))).epsilon(1e-11));
    }
  }
}

TEST_CASE("disk embedding basics") {
  const DiskEmbedding d({vec2(1, 0), vec2(0.1, 0.2), vec2(cplx(0, 0.05), 0)});
  const cplx w(0.3, -0.4);
  const CVec expect = vec2(1, 0) + w * vec2(0.1, 0.2) + w * w * vec2(cplx(0, 0.05), 0);
  CHECK((d(w) - expect).norm() < 1e-15);
  CHECK((d.derivative(w) - (vec2(0.1, 0.2) + 2.0 * w * vec2(cplx(0, 0.05), 0))).norm() < 1e-15);
  const double th = 0.7;
  CHECK((d.rotated(th)(w) - d(std::polar(1.0, th) * w)).norm() < 1e-15);
  CHECK((d.rescaled(0.5)(w) - d(0.5 * w)).norm() < 1e-15);
  CHECK(d.degree() == 2);
  CHECK(d.dimension() == 2);
  d.validate(ComplexChart::ball(2, 2.0));
}

TEST_CASE("disk validation") {
  const auto chart = ComplexChart::ball(2, 1.0);
  // Critical point at the origin.
  CHECK(error_kind([&] { DiskEmbedding({vec2(0, 0), vec2(0, 0), vec2(0.3, 0.1)}).validate(chart); }) ==
        ErrorKind::InvalidArgument);
  // Leaves the chart.
  CHECK_THROWS_AS(DiskEmbedding::affine(vec2(0.9, 0), vec2(0.3, 0)).validate(chart), LabError);
  // Immersed but i(1) = i(−1) on the boundary.
  CHECK(error_kind([&] {
          DiskEmbedding({vec2(0, 0), vec2(0, -0.2), vec2(0.3, 0), vec2(0, 0.2)}).validate(chart);
        }) == ErrorKind::InvalidArgument);
  // Degree above 8.
  std::vector<CVec> many(10, vec2(0.01, 0));
  CHECK_THROWS_AS(DiskEmbedding{many}, LabError);
}

TEST_CASE("area density examples") {
  const CVec a = vec2(cplx(0.1, 0.2), -0.3), b = vec2(cplx(0.2, -0.1), cplx(0, 0.15));
  const auto flat = model::ModelSpace{0.0, 2}.closed_form_metric();
  const auto d = DiskEmbedding::affine(a, b);
  for (cplx w : {cplx(0), cplx(0.5, 0.2), cplx(-0.1, -0.9)})
    CHECK(area_density(flat, d, w) == doctest::Approx(b.squaredNorm()).epsilon(1e-14));

  const model::ModelSpace M{1.0, 2};
  const auto dm = DiskEmbedding::affine(CVec::Zero(2), b);
  for (cplx w : {cplx(0), cplx(0.5, 0.2)}) {
    // Closed-form pullback: g(z)(b, b) with g = (1 + |z|²/2)^{-1}(δ − (1/2)z̄z/(1 + |z|²/2)).
    const CVec z = w * b;
    const double s = 1 + 0.5 * z.squaredNorm();
    const double expect = b.squaredNorm() / s - 0.5 * std::norm(z.dot(b)) / (s * s);
    CHECK(area_density(M.closed_form_metric(), dm, w) == doctest::Approx(expect).epsilon(1e-12));
  }

  const auto cone = model::make_cone(0.5);
  CVec c(1), e(1);
  c << 0.6;
  e << cplx(0.1, 0.1);
  const auto dc = DiskEmbedding::affine(c, e);
  const cplx w(0.3, 0.5);
  CHECK(area_density(cone.metric(), dc, w) ==
        doctest::Approx(std::pow(std::abs(dc(w)[0]), -1.0) * std::norm(e[0])).epsilon(1e-12));
}

TEST_CASE("log moment") {
  const auto flat = model::ModelSpace{0.0, 2}.closed_form_metric();
  Gen g(1);
  for (int s = 0; s < 5; ++s) {
    const CVec b = g.cvec(2) * 0.2;
    const auto d = DiskEmbedding::affine(g.cvec(2), b);
    CHECK(log_moment(flat, d) == doctest::Approx(-b.squaredNorm()).epsilon(1e-12));
  }
  // Shrinking by s scales by s²: exactly for flat affine disks, to leading order on a model.
  const auto q = DiskEmbedding::affine(vec2(0.1, 0), vec2(0.2, 0.1));
  CHECK(log_moment(flat, q.rescaled(0.5)) == doctest::Approx(0.25 * log_moment(flat, q)).epsilon(1e-12));
  const model::ModelSpace M{1.0, 2};
  const auto gm = M.closed_form_metric();
  const auto dm = DiskEmbedding::affine(vec2(0.2, 0.1), vec2(0.1, 0.1));
  const double base = log_moment(gm, dm);
  const double small = log_moment(gm, DiskEmbedding::affine(vec2(0.2, 0.1), vec2(1e-3, 1e-3)));
  CHECK(small / base == doctest::Approx(1e-4).epsilon(0.05));
  // Self-convergence in the radial node count.
  const auto fine = log_moment(gm, dm, {32, 32, 64});
  CHECK(std::abs(fine - base) <= 1e-7);
  CHECK(base < 0);
}

TEST_CASE("flat equality: comparison defect vanishes for holomorphic disks") {
  const auto S = model_space(0.0, 2);
  Gen g(2);
  double worst = 0;
  for (int s = 0; s < 100; ++s) {
    const auto d = random_disk(g, g.cvec(2), g.uniform(0.05, 1.0), s % 2 == 1);
    const CVec p = g.cvec(2);
    const auto r = comparison_defect(S.metric, d, p, 0.0, S.distance);
    worst = std::max(worst, std::abs(r.defect));
    CHECK(r.error_estimate >= 0);
    CHECK(r.log_moment <= 0);
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("model equality with the closed-form distance") {
  Gen g(3);
  for (double K : {-1.0, 1.0}) {
    const auto S = model_space(K, 2);
    for (int s = 0; s < 20; ++s) {
      const CVec p = g.in_ball(2, 0.5);
      const auto d = random_disk(g, g.in_ball(2, 0.5), g.uniform(0.02, 0.3), s % 2 == 1);
      const auto r = comparison_defect(S.metric, d, p, K, S.distance);
      INFO("K = " << K << " defect " << r.defect);
      CHECK(std::abs(r.defect) <= 1e-6);
    }
  }
}

TEST_CASE("flat K = 1 violation matches the exact defect") {
  // Orthonormal X, Y at p = 0: d(w) = √(ε₁²|w|² + ε₂²), so the defect is
  // f(ε₂) + ε₁² − f(√(ε₁² + ε₂²)) with f = d²_{1}.
  const auto S = model_space(0.0, 2);
  const core::TangentPair pair{vec2(1, 0), vec2(0, 1)};
  for (double e2 : {5e-2, 2.5e-2, 1.25e-2}) {
    const double e1 = 5e-3;
    const auto d = violation_disk(CVec::Zero(2), pair, e1, e2);
    CHECK((d(0) - e2 * pair.Y).norm() < 1e-16);
    auto f = [](double r) { return -4 * std::log(std::cos(r / std::sqrt(2.0))); };
    const double exact = f(e2) + e1 * e1 - f(std::hypot(e1, e2));
    const auto r = comparison_defect(S.metric, d, CVec::Zero(2), 1.0, S.distance);
    CHECK(r.defect < 0);
    CHECK(r.defect == doctest::Approx(exact).epsilon(1e-7));
    // Leading order −(1/6)ε₁²ε₂²·R′ with R′ = −bk_defect = 1 for orthonormal X, Y;
    // the next term of the expansion is a factor 1 + ε₁²/(2ε₂²).
    const double lead = leading_order_defect(1.0, e1, e2);
    CHECK(r.defect / lead == doctest::Approx(1 + e1 * e1 / (2 * e2 * e2)).epsilon(0.01));
  }
}

TEST_CASE("asymptotic display examples") {
  CHECK(asymptotic_defect(0.0, 5e-3, 5e-2) == 0.0);
  CHECK(asymptotic_defect(1.0, 5e-3, 5e-2) == doctest::Approx(-6.2411e-8).epsilon(1e-4));
  CHECK(leading_order_defect(1.0, 5e-3, 5e-2) == doctest::Approx(-(2.5e-5 * 2.5e-3) / 6).epsilon(1e-14));
}

TEST_CASE("annulus defect") {
  const auto flat = model_space(0.0, 2);
  Gen g(4);
  const auto d = random_disk(g, g.cvec(2), 0.3, false);
  const CVec p = g.cvec(2);
  for (double eps : {0.05, 0.01}) {
    const auto a = annulus_defect(flat.metric, d, p, 0.0, eps, flat.distance);
    CHECK(a.value >= -1e-8);
  }
  const auto M = model_space(1.0, 2);
  const auto dm = random_disk(g, g.in_ball(2, 0.3), 0.2, false);
  const CVec pm = g.in_ball(2, 0.3);
  const auto am = annulus_defect(M.metric, dm, pm, 1.0, 0.01, M.distance);
  CHECK(am.value >= -5e-3);
  // Consistency with the comparison defect on a violating disk.
  const auto v = violation_disk(CVec::Zero(2), {vec2(1, 0), vec2(0, 1)}, 5e-3, 5e-2);
  const auto av = annulus_defect(flat.metric, v, CVec::Zero(2), 1.0, 0.01, flat.distance);
  const auto cv = comparison_defect(flat.metric, v, CVec::Zero(2), 1.0, flat.distance);
  CHECK(std::abs(av.value - 0.5 * pi * cv.defect) <= 1e-2);
  CHECK(av.value / (0.5 * pi * cv.defect) == doctest::Approx(1.0).epsilon(0.05));
  CHECK_THROWS_AS(annulus_defect(flat.metric, d, p, 0.0, 0.2, flat.distance), LabError);
}

TEST_CASE("rotation invariance of the comparison report") {
  const auto M = model_space(-1.0, 2);
  Gen g(5);
  for (int s = 0; s < 5; ++s) {
    const auto d = random_disk(g, g.in_ball(2, 0.4), 0.2, true);
    const CVec p = g.in_ball(2, 0.4);
    const auto r0 = comparison_defect(M.metric, d, p, -1.0, M.distance);
    const double th = 2 * pi * g.uniform();
    const auto r1 = comparison_defect(M.metric, d.rotated(th), p, -1.0, M.distance);
    // The rotated grid is a different set of boundary points, so agreement is at
    // the level of the spectral boundary rule.
    check_reports_equal(r0, r1, 1e-10);
  }
}

TEST_CASE("grid refinement stays within the error estimate") {
  const auto M = model_space(1.0, 2);
  Gen g(6);
  for (int s = 0; s < 3; ++s) {
    const auto d = random_disk(g, g.in_ball(2, 0.3), 0.25, true);
    const CVec p = g.in_ball(2, 0.3);
    const auto r = comparison_defect(M.metric, d, p, 1.0, M.distance);
    const auto f = comparison_defect(M.metric, d, p, 1.0, M.distance, {32, 64, 128});
    CHECK(std::abs(r.defect - f.defect) <= std::max(r.error_estimate, 1e-14));
  }
}

TEST_CASE("scaling covariance") {
  // g → λ²g, K → K/λ²: distances scale by λ and the defect by λ².
  for (double K : {-1.0, 1.0}) {
    const model::ModelSpace M{K, 2};
    Gen g(7);
    const auto d = random_disk(g, g.in_ball(2, 0.3), 0.2, true);
    const CVec p = g.in_ball(2, 0.3);
    const auto base = comparison_defect(M.closed_form_metric(), d, p, K,
                                        DistanceStrategy::closed_form(
                                            [K](const CVec& a, const CVec& b) { return model::model_distance(K, a, b); },
                                            "model"));
    // Use a violating K so the defect is not zero.
    const double Kv = K + 0.5;
    const auto v = comparison_defect(M.closed_form_metric(), d, p, Kv,
                                     DistanceStrategy::closed_form(
                                         [K](const CVec& a, const CVec& b) { return model::model_distance(K, a, b); },
                                         "model"));
    for (double lam2 : {0.25, 4.0}) {
      const double lam = std::sqrt(lam2);
      const auto scaled = DistanceStrategy::closed_form(
          [K, lam](const CVec& a, const CVec& b) { return lam * model::model_distance(K, a, b); }, "scaled");
      const auto gs = M.closed_form_metric().scaled(lam2);
      const auto bs = comparison_defect(gs, d, p, K / lam2, scaled);
      const auto vs = comparison_defect(gs, d, p, Kv / lam2, scaled);
      CHECK(std::abs(bs.defect - lam2 * base.defect) <= 1e-6 * std::max(1e-6, std::abs(lam2 * base.defect)) + 1e-14);
      CHECK(vs.defect == doctest::Approx(lam2 * v.defect).epsilon(1e-6));
    }
  }
}

TEST_CASE("nonnegative BK defect gives nonnegative comparison defects") {
  // M_{−1} has BK ≥ −1.5 at every point, so K = −1.5 disks must not fail.
  const auto M = model_space(-1.0, 2);
  Gen g(8);
  for (int s = 0; s < 30; ++s) {
    const auto d = random_disk(g, g.in_ball(2, 0.5), g.uniform(0.02, 0.3), s % 2 == 0);
    const auto r = comparison_defect(M.metric, d, g.in_ball(2, 0.5), -1.5, M.distance);
    CHECK(r.defect >= -1e-6);
  }
}

TEST_CASE("base point on the disk") {
  const auto flat = model_space(0.0, 2);
  const auto d = DiskEmbedding::affine(vec2(0.1, 0.2), vec2(0.3, -0.1));
  const auto on_center = comparison_defect(flat.metric, d, d(0), 0.0, flat.distance);
  const auto on_edge = comparison_defect(flat.metric, d, d(std::polar(1.0, 0.4)), 0.0, flat.distance);
  CHECK(on_center.boundary_refined);
  CHECK(on_edge.boundary_refined);
  CHECK(std::abs(on_center.defect) <= 1e-8);
  CHECK(std::abs(on_edge.defect) <= 1e-8);
  const auto far = comparison_defect(flat.metric, d, vec2(3, 3), 0.0, flat.distance);
  CHECK_FALSE(far.boundary_refined);
  CHECK(on_center.boundary_points > far.boundary_points);
}

TEST_CASE("K > 0 beyond the cap") {
  const auto flat = model_space(0.0, 1);
  CVec a(1), b(1), p(1);
  a << 2.5;
  b << 0.1;
  p << 0;
  CHECK(error_kind([&] { comparison_defect(flat.metric, DiskEmbedding::affine(a, b), p, 1.0, flat.distance); }) ==
        ErrorKind::DomainExceeded);
}

TEST_CASE("torsion metric") {
  TorsionTensor zero(2);
  const auto chart = ComplexChart::ball(2, 0.5);
  const auto g0 = torsion_metric(zero, chart);
  CHECK((g0(vec2(0.1, 0.2)) - CMat::Identity(2, 2)).norm() == 0.0);

  TorsionTensor T(2);
  T.set(0, 0, 1, cplx(0.7, -0.2));
  CHECK(T(0, 1, 0) == -cplx(0.7, -0.2));
  // g_{ab̄} = δ + Σ_j T_{b̄ja} z_j + conj(T_{āj b}) z̄_j, written out for this component.
  const CVec z = vec2(cplx(0.1, -0.05), cplx(0.12, 0.03));
  const cplx t = T(0, 0, 1);
  CMat expect = CMat::Identity(2, 2);
  expect(1, 0) += t * z[0];             // T_{0̄ 0 1} z_0 at (a, b) = (1, 0)
  expect(0, 0) += -t * z[1];            // T_{0̄ 1 0} z_1 at (0, 0)
  expect(0, 1) += std::conj(t) * std::conj(z[0]);
  expect(0, 0) += std::conj(-t) * std::conj(z[1]);
  CHECK(std::abs(T.contract(vec2(1, 0), vec2(0, 1)) + t) < 1e-15);
  const CMat got = torsion_metric(T, chart)(z);
  CHECK((got - expect).norm() < 1e-15);
  Gen g(9);
  for (int s = 0; s < 50; ++s) CHECK(min_eigenvalue(torsion_metric(T, chart)(g.in_ball(2, 0.2))) > 0);
}

TEST_CASE("torsion disk defect tracks the leading term") {
  TorsionTensor T(2);
  T.set(0, 0, 1, 1.0);  // S = Σ ā b T a = −1 for a = e0, b = e1
  const auto chart = ComplexChart::ball(2, 0.5);
  const auto g = torsion_metric(T, chart);
  const CVec a = vec2(1, 0), b = vec2(0, 1);
  CHECK(T.contract(a, b).real() == -1.0);
  const auto d = torsion_disk(a, b, 5e-3, 5e-2);
  const auto dist = geodesy::numeric_strategy(g, {}, chart);
  const auto r = comparison_defect(g, d, CVec::Zero(2), 0.0, dist);
  const double lead = torsion_leading_defect(T, a, b, 5e-3, 5e-2);
  INFO("defect " << r.defect << " leading " << lead);
  CHECK(lead == doctest::Approx(-2.5e-6).epsilon(1e-12));
  CHECK(r.defect < 0);
  CHECK(r.defect / lead == doctest::Approx(1.0).epsilon(0.05));
  CHECK(torsion_display(T, a, b, 5e-3, 5e-2) == doctest::Approx(4 * 2.5e-5 * 5e-2 * std::log(5e-2)).epsilon(1e-12));
}
