#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kahlerlab/kahler.hpp"
#include "kahlerlab/model_spaces.hpp"
#include "kahlerlab/spaces.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace kahlerlab;
using namespace kahlerlab::model;
using testsupport::Gen;
using std::numbers::pi;

namespace {

ErrorKind error_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const LabError& e) {
    return e.kind();
  }
  FAIL("no LabError thrown");
  return ErrorKind::InvalidArgument;
}

CMat random_unitary(Gen& g, int n) {
  CMat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = g.cnormal();
  Eigen::HouseholderQR<CMat> qr(A);
  return qr.householderQ() * CMat::Identity(n, n);
}

}  // namespace

TEST_CASE("dK_transform examples") {
  for (double d : {0.0, 0.3, 1.7}) CHECK(dK_transform(d, 0.0) == d * d);
  for (double K : {-3.0, -1.0, 0.5, 1.0}) CHECK(dK_transform(0.0, K) == 0.0);
  const double d = 1e-2;
  CHECK(std::abs(dK_transform(d, 1.0) - (d * d + std::pow(d, 4) / 12)) < 1e-10);
  CHECK(std::abs(dK_transform(d, -1.0) - (d * d - std::pow(d, 4) / 12)) < 1e-10);
  // Exact closed form away from 0.
  CHECK(dK_transform(1.0, 1.0) == doctest::Approx(-4 * std::log(std::cos(std::sqrt(0.5)))).epsilon(1e-14));
  CHECK(dK_transform(1.0, -1.0) == doctest::Approx(4 * std::log(std::cosh(std::sqrt(0.5)))).epsilon(1e-14));
  // Continuous at K = 0.
  CHECK(dK_transform(0.8, 1e-9) == doctest::Approx(0.64).epsilon(1e-9));
  CHECK(dK_transform(0.8, -1e-9) == doctest::Approx(0.64).epsilon(1e-9));
  // Large hyperbolic distances do not overflow.
  CHECK(std::isfinite(dK_transform(200.0, -1.0)));
}

TEST_CASE("dK_transform domain") {
  CHECK(error_kind([] { dK_transform(pi / std::sqrt(2.0), 1.0); }) == ErrorKind::DomainExceeded);
  CHECK(error_kind([] { dK_transform(1.2, 4.0, 0.0); }) == ErrorKind::DomainExceeded);  // cap π/√8 ≈ 1.11
  CHECK(error_kind([] { dK_transform(-0.1, 0.0); }) == ErrorKind::InvalidArgument);
  CHECK(std::isfinite(dK_transform(pi / std::sqrt(2.0) - 1e-6, 1.0)));
}

TEST_CASE("dK_transform is monotone in d and K") {
  const double Ks[] = {-2.0, -1.0, -0.25, 0.0, 0.25, 1.0};
  for (double K : Ks) {
    double prev = -1;
    for (int i = 0; i <= 200; ++i) {
      const double d = 0.01 * i;
      if (K > 0 && d >= 0.99 * pi / std::sqrt(2 * K)) break;
      const double v = dK_transform(d, K);
      CHECK(v >= prev);
      prev = v;
      if (K < 0) CHECK(v <= d * d);
      if (K > 0) CHECK(v >= d * d);
    }
  }
  for (int i = 1; i <= 20; ++i) {
    const double d = 0.05 * i;
    double prev = -1;
    for (double K : Ks) {
      const double v = dK_transform(d, K);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("model_distance examples") {
  Gen g(1);
  for (int s = 0; s < 10; ++s) {
    const CVec a = g.cvec(2), b = g.cvec(2);
    CHECK(model_distance(0.0, a, b) == doctest::Approx((a - b).norm()).epsilon(1e-14));
  }
  CVec far(1);
  far << 1e9;
  CHECK(model_distance(1.0, CVec::Zero(1), far) == doctest::Approx(pi / std::sqrt(2.0)).epsilon(1e-8));
  // Base point 0: (2/√c)·arctan(√c|z|/2) and the artanh analogue.
  for (double r : {0.1, 0.7, 1.3}) {
    CVec z(1);
    z << std::polar(r, 0.4);
    const double c = std::sqrt(2.0);
    CHECK(model_distance(1.0, CVec::Zero(1), z) == doctest::Approx((2 / c) * std::atan(c * r / 2)).epsilon(1e-13));
    CHECK(model_distance(-1.0, CVec::Zero(1), z) ==
          doctest::Approx((2 / c) * std::atanh(c * r / 2)).epsilon(1e-13));
  }
}

TEST_CASE("model_distance: squared distance from 0 is twice the potential") {
  Gen g(2);
  for (double K : {-1.0, 1.0, 0.3}) {
    const ModelSpace M{K, 2};
    const auto phi = M.potential();
    for (int s = 0; s < 10; ++s) {
      const CVec z = g.in_ball(2, 0.9);
      CHECK(0.5 * dK_transform(model_distance(K, CVec::Zero(2), z), K) ==
            doctest::Approx(phi(z)).epsilon(1e-12));
    }
  }
}

TEST_CASE("model_distance: infinitesimal form is the metric") {
  Gen g(3);
  for (double K : {-1.0, 1.0}) {
    const ModelSpace M{K, 2};
    for (int s = 0; s < 5; ++s) {
      const CVec z = g.in_ball(2, 0.8);
      const CVec v = g.unit(2) * 1e-5;
      const double expect = std::sqrt(hermitian_norm2(M.metric_at(z), v));
      CHECK(model_distance(K, z, z + v) == doctest::Approx(expect).epsilon(1e-4));
    }
  }
}

TEST_CASE("model_distance: triangle inequality and unitary invariance") {
  Gen g(4);
  for (double K : {-1.0, 1.0}) {
    for (int s = 0; s < 200; ++s) {
      const CVec a = g.in_ball(2, 1.2), b = g.in_ball(2, 1.2), c = g.in_ball(2, 1.2);
      CHECK(model_distance(K, a, c) <= model_distance(K, a, b) + model_distance(K, b, c) + 1e-9);
    }
    for (int s = 0; s < 20; ++s) {
      const CMat U = random_unitary(g, 2);
      const CVec a = g.in_ball(2, 1.0), b = g.in_ball(2, 1.0);
      CHECK(model_distance(K, U * a, U * b) == doctest::Approx(model_distance(K, a, b)).epsilon(1e-12));
      CHECK(model_distance(K, a, b) == doctest::Approx(model_distance(K, b, a)).epsilon(1e-14));
    }
  }
}

TEST_CASE("model_space wires the closed-form distance") {
  const auto S = model_space(-1.0, 2);
  Gen g(5);
  const CVec a = g.in_ball(2, 0.5), b = g.in_ball(2, 0.5);
  CHECK(S.distance(a, b).d == model_distance(-1.0, a, b));
  CHECK(S.distance.kind() == DistanceStrategy::Kind::ClosedForm);
  CHECK(S.is_model);
}

TEST_CASE("cone_distance examples") {
  const auto half = make_cone(0.5);
  CHECK(cone_distance(half, {0.7, 1.0}, {0.0, 0.0}) == doctest::Approx(half.geodesic_radius(0.7)).epsilon(1e-14));
  // ψ ≥ π: through the apex.
  const auto wide = make_cone(-1.0);
  CHECK(cone_distance(wide, {1.0, 0.0}, {2.0, 2.0}) ==
        doctest::Approx(wide.geodesic_radius(1.0) + wide.geodesic_radius(2.0)).epsilon(1e-14));
  // α = 1/2, (1, 0) to (1, π): ψ = π/2 and ρ = 2.
  CHECK(cone_distance(half, {1.0, 0.0}, {1.0, pi}) == doctest::Approx(2 * 2 * std::sin(pi / 4)).epsilon(1e-14));
  CHECK(half.chart_radius(half.geodesic_radius(0.37)) == doctest::Approx(0.37).epsilon(1e-14));
}

TEST_CASE("cone_distance against a grid shortest path") {
  const double alpha = 0.5;
  const auto cone = make_cone(alpha);
  const double exact = cone_distance(cone, {1.0, 0.0}, {1.0, pi});
  // Nodes at multiples of 1/100 offset by 1/200, so ±1 are nodes and 0 is not.
  const double graph = testsupport::conformal_graph_distance(
      [alpha](cplx z) { return std::pow(std::abs(z), -alpha); }, cplx(1, 0), cplx(-1, 0), 1.505, 302);
  INFO("exact " << exact << " graph " << graph);
  CHECK(graph >= exact * (1 - 1e-3));
  CHECK(graph <= exact * 1.03);
}

TEST_CASE("cone with α = 0 is the plane") {
  const auto flat = make_cone(0.0);
  Gen g(6);
  for (int s = 0; s < 50; ++s) {
    const cplx a = g.cnormal(), b = g.cnormal();
    const double d = cone_distance(flat, {std::abs(a), std::arg(a)}, {std::abs(b), std::arg(b)});
    CHECK(std::abs(d - std::abs(a - b)) <= 1e-12 * std::max(1.0, std::abs(a - b)));
  }
}

TEST_CASE("orbifold cones") {
  CHECK(orbifold_cone(2).alpha == 0.5);
  CHECK(orbifold_cone(3).alpha == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(error_kind([] { orbifold_cone(1); }) == ErrorKind::InvalidArgument);
  Gen g(7);
  for (int k : {2, 3, 5}) {
    const auto cone = orbifold_cone(k);
    for (int s = 0; s < 50; ++s) {
      const cplx w1 = g.cnormal(), w2 = g.cnormal();
      const double d = cone_distance(cone, orbifold_chart_point(k, w1), orbifold_chart_point(k, w2));
      const double oracle = testsupport::deck_distance(k, w1, w2);
      CHECK(std::abs(d - oracle) <= 1e-12 * std::max(1.0, oracle));
    }
  }
}

TEST_CASE("cone potential reproduces the cone metric") {
  for (double alpha : {0.0, 0.5, 2.0 / 3, -0.5}) {
    const auto cone = make_cone(alpha);
    const auto phi = cone.potential();
    const auto g = cone.metric();
    for (double r : {0.2, 0.8, 2.5}) {
      CVec z(1);
      z << std::polar(r, 1.1);
      const double want = g(z)(0, 0).real();
      CHECK(want == doctest::Approx(std::pow(r, -2 * alpha)).epsilon(1e-12));
      CHECK(2 * core::metric_from_potential(phi, z)(0, 0).real() == doctest::Approx(want).epsilon(1e-6));
    }
  }
}

TEST_CASE("link quotient distance") {
  const auto q = round_quotient(2);
  Gen g(8);
  const CVec s = g.cvec(2);
  CHECK(link_quotient_distance(q, s, s * std::polar(2.5, 0.3)) < 1e-7);
  CVec e0(2), e1(2);
  e0 << 1, 0;
  e1 << 0, 1;
  CHECK(link_quotient_distance(q, e0, e1) == doctest::Approx(pi / 2).epsilon(1e-15));
  const auto q3 = round_quotient(3);
  for (int k = 0; k < 20; ++k) {
    const CVec a = g.cvec(3), b = g.cvec(3);
    CHECK(link_quotient_distance(q3, a, b) == doctest::Approx(testsupport::fubini_study(a, b)).epsilon(1e-10));
  }
  auto bent = q;
  bent.log_H = [](const CVec&) { return 0.0; };
  CHECK(error_kind([&] { link_quotient_distance(bent, e0, e1); }) == ErrorKind::Unsupported);
}

TEST_CASE("distance to a complex line through 0 is r·sin of the Fubini-Study distance") {
  // Minimize the cone formula √(r² + t² − 2rt·cos θ_{S³}) over points t·e^{iθ}s′ of the line.
  const auto q = round_quotient(2);
  Gen g(9);
  for (int k = 0; k < 10; ++k) {
    const CVec s = g.unit(2), sp = g.unit(2);
    const double r = g.uniform(0.5, 2);
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 20000; ++j) {
      const cplx ph = std::polar(1.0, 2 * pi * j / 20000);
      const double cs = std::clamp((sp * ph).dot(s).real(), -1.0, 1.0);
      const double t = std::max(0.0, r * cs);
      best = std::min(best, std::sqrt(std::max(0.0, r * r + t * t - 2 * r * t * cs)));
    }
    CHECK(r * std::sin(link_quotient_distance(q, s, sp)) == doctest::Approx(best).epsilon(1e-5));
  }
}

TEST_CASE("quotient potential examples") {
  QuotientData q = round_quotient(2);
  CVec z(1);
  z << 0;
  CHECK(quotient_potential(q, z) == 0.0);
  z << std::polar(1.0, 0.7);
  CHECK(quotient_potential(q, z) == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
  q.delta = 2;
  CHECK(quotient_potential(q, z) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("affine chart divides by the largest coordinate") {
  CVec s(3);
  s << cplx(0.1, 0), cplx(0, 2), cplx(-1, 0);
  int pivot = -1;
  const CVec z = affine_chart(s, &pivot);
  CHECK(pivot == 1);
  CHECK(std::abs(z[0] - s[0] / s[1]) < 1e-15);
  CHECK(std::abs(z[1] - s[2] / s[1]) < 1e-15);
  CHECK(error_kind([] { affine_chart(CVec::Zero(2)); }) == ErrorKind::InvalidArgument);
}
