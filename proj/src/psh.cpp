#include "kahlerlab/psh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "kahlerlab/quadrature.hpp"

namespace kahlerlab::psh {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CVec gaussian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> N01;
  CVec v(n);
  for (int k = 0; k < n; ++k) v[k] = cplx(N01(rng), N01(rng));
  return v;
}

}  // namespace

double disk_laplacian(const std::function<double(const CVec&)>& f, const disk::DiskEmbedding& disk,
                      cplx w, double h) {
  auto L = [&](double s) {
    const double f0 = f(disk(w));
    return (f(disk(w + s)) + f(disk(w - s)) + f(disk(w + cplx(0, s))) + f(disk(w - cplx(0, s))) -
            4 * f0) /
           (s * s);
  };
  return (4 * L(0.5 * h) - L(h)) / 3;
}

disk::DiskEmbedding random_disk(std::uint64_t seed, int index, const CVec& center,
                                double region_radius, double size_min, double size_max,
                                bool degree2) {
  std::mt19937_64 rng(mix(seed, static_cast<std::uint64_t>(index)));
  std::uniform_real_distribution<double> U(0, 1);
  const int n = static_cast<int>(center.size());
  CVec dir = gaussian(rng, n);
  const CVec a = center + dir / dir.norm() * (region_radius * std::pow(U(rng), 1.0 / (2 * n)));
  const double size = size_min * std::pow(size_max / size_min, U(rng));
  CVec b = gaussian(rng, n);
  b *= size / b.norm();
  std::vector<CVec> coeffs{a, b};
  if (degree2 && index % 2 == 1) {
    CVec c2 = gaussian(rng, n);
    c2 *= 0.4 * size * U(rng) / c2.norm();
    coeffs.push_back(c2);
  }
  return disk::DiskEmbedding(std::move(coeffs));
}

namespace {

std::vector<cplx> evaluation_points(int count) {
  std::vector<cplx> pts{0};
  const int rings = 2;
  const int per = std::max(1, (count - 1) / rings);
  for (int r = 1; r <= rings; ++r)
    for (int t = 0; t < per; ++t) pts.push_back(std::polar(0.35 * r, 2 * kPi * (t + 0.5 * r) / per));
  return pts;
}

double min_distance_to(const disk::DiskEmbedding& d, const std::vector<Singularity>& sing) {
  double m = kInf;
  for (const auto& s : sing)
    for (int i = 0; i <= 16; ++i)
      for (int t = 0; t < (i ? 48 : 1); ++t)
        m = std::min(m, (d(std::polar(i / 16.0, 2 * kPi * t / 48)) - s.center).norm() - s.radius);
  return m;
}

double max_speed(const disk::DiskEmbedding& d) {
  double m = 0;
  for (int t = 0; t < 16; ++t) m = std::max(m, d.derivative(std::polar(1.0, 2 * kPi * t / 16)).norm());
  return m;
}

// Keeps every sampled point of the disk within the injectivity guard for K > 0.
bool within_guard(const disk::DiskEmbedding& d, const std::function<double(const CVec&)>& dist_p,
                  double K) {
  if (K <= 0) return true;
  const double guard = 0.45 * kPi / std::sqrt(2 * K);
  for (int i = 0; i <= 4; ++i)
    for (int t = 0; t < (i ? 16 : 1); ++t)
      if (!(dist_p(d(std::polar(i / 4.0, 2 * kPi * t / 16))) < guard)) return false;
  return true;
}

double potential_mismatch(const KahlerSpace& space, const CVec& center, double radius,
                          std::uint64_t seed) {
  if (!space.potential || space.metric.has_potential()) return 0;
  std::mt19937_64 rng(mix(seed, 7777));
  std::uniform_real_distribution<double> U(0, 1);
  double worst = 0;
  int done = 0;
  for (int s = 0; s < 200 && done < 12; ++s) {
    CVec dir = gaussian(rng, space.n);
    const CVec z = center + dir / dir.norm() * radius * U(rng);
    if (!space.chart.contains(z) || space.potential.clearance(z) < 0.05) continue;
    const CMat G = space.metric(z);
    const CMat P = 2.0 * core::levi_form(space.potential, z, 1e-3);
    worst = std::max(worst, (G - P).norm() / G.norm());
    ++done;
  }
  return worst;
}

// Smoothstep bump χ = S(1 − |w−c|²/ρ²), S(t) = 10t³ − 15t⁴ + 6t⁵, and its Laplacian.
double bump_laplacian(double sigma, double rho) {
  const double t = 1 - sigma / (rho * rho);
  if (t <= 0) return 0;
  const double S1 = 30 * t * t * (1 - t) * (1 - t);
  const double S2 = 60 * t * (1 - t) * (1 - 2 * t);
  return 4 * (-S1 / (rho * rho) + sigma * S2 / (rho * rho * rho * rho));
}

// ∫ f(i(w)) Δχ dA over the bump support, polar around c with u = ρs².
double bump_pairing(const std::function<double(const CVec&)>& f, const disk::DiskEmbedding& d,
                    cplx c, double rho, int n_s = 48, int n_t = 96) {
  const disk::QuadratureRule q = disk::gauss_legendre(n_s, 0, 1);
  double total = 0;
  for (int t = 0; t < n_t; ++t) {
    const double th = 2 * kPi * (t + 0.5) / n_t;
    for (int k = 0; k < n_s; ++k) {
      const double s = q.nodes[k];
      const double u = rho * s * s;
      const double jac = u * 2 * rho * s;  // u du
      total += q.weights[k] * jac * f(d(c + std::polar(u, th))) * bump_laplacian(u * u, rho);
    }
  }
  return total * 2 * kPi / n_t;
}

struct Evaluator {
  const KahlerSpace& space;
  std::function<double(const CVec&)> F;
  std::function<double(const CVec&)> dist_p;
  double K;
  const SamplerConfig& cfg;
};

void run_pointwise(const Evaluator& ev, const CVec& center, PshVerdict& v) {
  const auto pts = evaluation_points(ev.cfg.points_per_disk);
  v.min_value = kInf;
  for (int i = 0; i < ev.cfg.disks; ++i) {
    std::optional<disk::DiskEmbedding> d;
    for (int attempt = 0; attempt < 40 && !d; ++attempt) {
      const double shrink = std::pow(0.85, attempt / 4);
      disk::DiskEmbedding cand =
          random_disk(ev.cfg.seed, i * 1000 + attempt, center, ev.cfg.region_radius * shrink,
                      ev.cfg.size_min, ev.cfg.size_max * shrink, ev.cfg.degree2);
      try {
        cand.validate(ev.space.chart, 32);
      } catch (const LabError&) {
        continue;
      }
      const double reach = 3 * ev.cfg.h * max_speed(cand) + 1e-3;
      if (min_distance_to(cand, ev.space.singular) <= reach) continue;
      if (!within_guard(cand, ev.dist_p, ev.K)) continue;
      d = cand;
    }
    if (!d) continue;
    ++v.disks_tested;
    for (cplx w : pts) {
      const double density = disk::area_density(ev.space.metric, *d, w);
      const double val = disk_laplacian(ev.F, *d, w, ev.cfg.h) / (2 * density);
      ++v.points_tested;
      if (val < v.min_value) {
        v.min_value = val;
        v.witness = {d->coefficients(), w, i, false};
      }
    }
  }
  if (v.disks_tested == 0) fail(ErrorKind::InvalidArgument, "no admissible disk could be sampled");
}

void run_distributional(const Evaluator& ev, PshVerdict& v) {
  v.min_distributional = kInf;
  if (ev.cfg.crossing_disks <= 0 || ev.space.singular.empty()) {
    v.min_distributional = 0;
    return;
  }
  const auto& phi = ev.space.potential;
  for (int i = 0; i < ev.cfg.crossing_disks; ++i) {
    const Singularity& s = ev.space.singular[i % ev.space.singular.size()];
    std::mt19937_64 rng(mix(ev.cfg.seed, 500000 + i));
    std::uniform_real_distribution<double> U(0, 1);
    const double size = ev.cfg.size_min * std::pow(ev.cfg.size_max / ev.cfg.size_min, U(rng));
    CVec b = gaussian(rng, ev.space.n);
    b *= size / b.norm();
    const cplx c = std::polar(0.5 * U(rng), 2 * kPi * U(rng));
    const disk::DiskEmbedding d = disk::DiskEmbedding::affine(s.center - c * b, b);
    if (!within_guard(d, ev.dist_p, ev.K)) continue;
    const double rho = 0.4;
    auto safe_F = [&](const CVec& z) { return ev.F(z); };
    const double num = bump_pairing(safe_F, d, c, rho);
    const double den = bump_pairing([&](const CVec& z) { return phi(z); }, d, c, rho);
    const double ratio = num / std::abs(den);
    ++v.distributional_tested;
    if (ratio < v.min_distributional) {
      v.min_distributional = ratio;
      if (ratio < -ev.cfg.dist_tol && v.pass) v.witness = {d.coefficients(), c, i, true};
    }
  }
  if (v.distributional_tested == 0) v.min_distributional = 0;
}

PshVerdict run_checks(const KahlerSpace& space, std::function<double(const CVec&)> dist_p,
                      double K, const CVec& center, const SamplerConfig& cfg) {
  if (!space.potential) fail(ErrorKind::Unsupported, "space has no Kähler potential");
  PshVerdict v;
  v.seed = cfg.seed;
  v.potential_check = potential_mismatch(space, center, cfg.region_radius, cfg.seed);
  if (v.potential_check > 1e-4)
    fail(ErrorKind::InvalidArgument, "potential does not generate the metric (mismatch " +
                                         std::to_string(v.potential_check) + ")");
  const auto& phi = space.potential;
  auto F = [phi, dist_p, K](const CVec& z) {
    return phi(z) - 0.5 * model::dK_transform(dist_p(z), K);
  };
  Evaluator ev{space, F, dist_p, K, cfg};
  run_pointwise(ev, center, v);
  v.pass = v.min_value >= -cfg.tol;
  run_distributional(ev, v);
  if (v.min_distributional < -cfg.dist_tol) v.pass = false;
  return v;
}

}  // namespace

PshVerdict check_bk_lower(const KahlerSpace& space, const CVec& p, double K,
                          const SamplerConfig& cfg) {
  if (p.size() != space.n) fail(ErrorKind::InvalidArgument, "base point dimension");
  const DistanceStrategy dist = space.distance;
  auto dist_p = [dist, p](const CVec& z) { return dist(p, z).d; };
  return run_checks(space, dist_p, K, cfg.center ? *cfg.center : p, cfg);
}

double PointSet::distance(const KahlerSpace& space, const CVec& z) const {
  if (line) {
    if (!(space.is_model && space.model_K == 0))
      fail(ErrorKind::Unsupported, "distance to a line is closed-form only in flat space");
    const CVec u = line->second / line->second.norm();
    const CVec v = z - line->first;
    return (v - u.dot(v) * u).norm();
  }
  double m = kInf;
  for (const auto& s : points) m = std::min(m, space.distance(s, z).d);
  return m;
}

PshVerdict check_bk_lower_set(const KahlerSpace& space, const PointSet& S, double K,
                              const SamplerConfig& cfg) {
  if (S.points.empty() && !S.line) fail(ErrorKind::InvalidArgument, "empty set");
  const CVec center = cfg.center ? *cfg.center : (S.line ? S.line->first : S.points.front());
  auto dist_p = [&space, S](const CVec& z) { return S.distance(space, z); };
  return run_checks(space, dist_p, K, center, cfg);
}

RadialReport radial_potential_check(const model::ConeSurface& cone, int samples, double tol) {
  RadialReport rep;
  const core::ScalarField phi = cone.potential();
  const core::HermitianMetricField g = cone.metric();
  for (int s = 0; s < samples; ++s) {
    const double r = std::pow(10.0, -2 + 3.0 * (s + 0.5) / samples);  // [1e-2, 10]
    const double th = 2 * kPi * std::fmod(0.618033988749895 * s, 1.0);
    CVec z(1);
    z[0] = std::polar(r, th);
    const double h = 1e-2 * r;
    auto L = [&](double st) {
      CVec e(1);
      double sum = -4 * phi(z);
      for (cplx d : {cplx(st, 0), cplx(-st, 0), cplx(0, st), cplx(0, -st)}) {
        e[0] = z[0] + d;
        sum += phi(e);
      }
      return sum / (st * st);
    };
    const double lap = (4 * L(0.5 * h) - L(h)) / 3;
    const double expect = 2 * std::pow(r, -2 * cone.alpha);
    rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(lap - expect) / expect);
    const double G = g(z)(0, 0).real();
    const double P = 2 * core::levi_form(phi, z, 1e-3 * r)(0, 0).real();
    rep.max_potential_mismatch = std::max(rep.max_potential_mismatch, std::abs(G - P) / G);
    ++rep.samples;
  }
  rep.pass = rep.max_abs_residual <= tol && rep.max_potential_mismatch <= tol;
  return rep;
}

QuotientReport quotient_bk2_check(const model::QuotientData& q, const CVec& zprime,
                                  const SamplerConfig& cfg) {
  if (zprime.size() != q.n) fail(ErrorKind::InvalidArgument, "z′ must be homogeneous in ℂⁿ");
  int pivot = 0;
  const CVec zeta0 = model::affine_chart(zprime, &pivot);
  const int m = q.n - 1;
  auto homogeneous = [pivot, m](const CVec& zeta) {
    CVec s(m + 1);
    for (int i = 0, k = 0; i <= m; ++i) s[i] = i == pivot ? cplx(1) : zeta[k++];
    return s;
  };
  KahlerSpace space;
  space.name = "link-quotient";
  space.n = m;
  space.chart = ComplexChart::whole(m);
  space.potential = core::ScalarField(
      [q](const CVec& zeta) { return model::quotient_potential(q, zeta); }, "½log h");
  space.metric = core::HermitianMetricField::from_potential(space.potential, m);
  // Perturbations of H only enter through the potential; the distance stays Fubini-Study.
  const model::QuotientData round = model::round_quotient(q.n);
  space.distance = DistanceStrategy::closed_form(
      [round, homogeneous](const CVec& a, const CVec& b) {
        return model::link_quotient_distance(round, homogeneous(a), homogeneous(b));
      },
      "link-quotient");

  QuotientReport rep;
  rep.verdict = check_bk_lower(space, zeta0, 2.0, cfg);

  // Levi form of F at the evaluation points of a few sampled disks.
  auto F = [&](const CVec& zeta) {
    return model::quotient_potential(q, zeta) -
           0.5 * model::dK_transform(model::link_quotient_distance(round, homogeneous(zeta), zprime), 2.0);
  };
  core::ScalarField Fs(F, "F");
  rep.min_levi_eigenvalue = kInf;
  for (int i = 0; i < std::min(cfg.disks, 20); ++i) {
    const auto d = random_disk(cfg.seed, i, zeta0, cfg.region_radius, cfg.size_min, cfg.size_max, false);
    const CMat L = core::levi_form(Fs, d(0), 1e-3);
    rep.min_levi_eigenvalue = std::min(rep.min_levi_eigenvalue, min_eigenvalue(L));
  }
  return rep;
}

ThresholdResult k_threshold(const KahlerSpace& space, const CVec& p, double lo, double hi,
                            const SamplerConfig& cfg, double resolution) {
  if (!(hi > lo) || !(resolution > 0)) fail(ErrorKind::InvalidArgument, "bad bisection bracket");
  ThresholdResult res;
  auto test = [&](double K) {
    const PshVerdict v = check_bk_lower(space, p, K, cfg);
    res.trace.push_back({K, v.pass, v.min_value});
    return v.pass;
  };
  if (!test(lo)) {
    res.K = res.lo = res.hi = lo;
    return res;
  }
  if (test(hi)) {
    res.K = res.lo = res.hi = hi;
    return res;
  }
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    (test(mid) ? lo : hi) = mid;
  }
  res.K = lo;
  res.lo = lo;
  res.hi = hi;
  return res;
}

}  // namespace kahlerlab::psh
