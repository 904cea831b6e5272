#include "kahlerlab/geodesy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace kahlerlab::geodesy {

namespace {

double quad_form(const CMat& G, const RVec& d) { return hermitian_norm2(G, to_complex(d)); }

std::vector<CMat> metric_at_nodes(const core::HermitianMetricField& g,
                                  const std::vector<RVec>& nodes, bool checked) {
  std::vector<CMat> G(nodes.size());
  for (size_t m = 0; m < nodes.size(); ++m) {
    const CVec z = to_complex(nodes[m]);
    G[m] = checked ? g(z) : g.unchecked(z);
  }
  return G;
}

double energy_from(const std::vector<CMat>& G, const std::vector<RVec>& nodes) {
  const size_t N = nodes.size() - 1;
  double E = 0;
  for (size_t m = 0; m < N; ++m) {
    const RVec d = nodes[m + 1] - nodes[m];
    E += quad_form(G[m], d) + quad_form(G[m + 1], d);
  }
  return 0.5 * static_cast<double>(N) * E;
}

// Solves the block-tridiagonal system with diagonal blocks Dg and
// off-diagonal blocks Up (between j and j+1, symmetric), in place.
void block_thomas(std::vector<RMat> Dg, const std::vector<RMat>& Up, std::vector<RVec>& rhs) {
  const size_t M = Dg.size();
  std::vector<RMat> C(M);
  for (size_t j = 0; j < M; ++j) {
    if (j > 0) {
      Dg[j] -= Up[j - 1].transpose() * C[j - 1];
      rhs[j] -= Up[j - 1].transpose() * rhs[j - 1];
    }
    Eigen::LDLT<RMat> ldlt(Dg[j]);
    if (j + 1 < M) C[j] = ldlt.solve(Up[j]);
    rhs[j] = ldlt.solve(rhs[j]);
  }
  for (size_t j = M - 1; j-- > 0;) rhs[j] -= C[j] * rhs[j + 1];
}

bool admissible(const core::HermitianMetricField& g, const ComplexChart* chart,
                const std::vector<RVec>& nodes) {
  for (const auto& x : nodes) {
    const CVec z = to_complex(x);
    if (chart && !chart->contains(z)) return false;
    if (!(g.clearance(z) > 0)) return false;
    if (g.has_potential() && !(g.clearance(z) > 1.5 * g.step())) return false;
  }
  return true;
}

}  // namespace

double path_energy(const core::HermitianMetricField& g, const std::vector<RVec>& nodes) {
  if (nodes.size() < 2) fail(ErrorKind::InvalidArgument, "path needs at least two nodes");
  return energy_from(metric_at_nodes(g, nodes, true), nodes);
}

double path_energy_unchecked(const core::HermitianMetricField& g, const std::vector<RVec>& nodes) {
  if (nodes.size() < 2) fail(ErrorKind::InvalidArgument, "path needs at least two nodes");
  return energy_from(metric_at_nodes(g, nodes, false), nodes);
}

double path_length(const core::HermitianMetricField& g, const std::vector<RVec>& nodes) {
  double L = 0;
  for (size_t m = 0; m + 1 < nodes.size(); ++m) {
    const RVec d = nodes[m + 1] - nodes[m];
    L += std::sqrt(std::max(0.0, quad_form(g(to_complex(0.5 * (nodes[m] + nodes[m + 1]))), d)));
  }
  return L;
}

DescentStats minimize_energy(const core::HermitianMetricField& g, std::vector<RVec>& nodes,
                             const GeodesicOptions& opts, const NodeConstraints& constraints,
                             const ComplexChart* chart) {
  const size_t N = nodes.size() - 1;
  if (N < 2) fail(ErrorKind::InvalidArgument, "path needs at least three nodes");
  const int D = static_cast<int>(nodes[0].size());
  const double Nd = static_cast<double>(N);
  const double scale = std::max(1e-300, (nodes[N] - nodes[0]).norm());
  const double s = opts.fd_step;

  DescentStats st;
  std::vector<CMat> G = metric_at_nodes(g, nodes, true);
  double E = energy_from(G, nodes);
  st.energy_trace.push_back(E);

  for (int it = 0; it < opts.max_iter; ++it) {
    st.iterations = it + 1;
    std::vector<RVec> grad(N - 1, RVec::Zero(D));
    std::vector<RMat> A(N + 1);
    for (size_t m = 0; m <= N; ++m) A[m] = realify(G[m]);
    std::vector<RVec> delta(N);
    for (size_t m = 0; m < N; ++m) delta[m] = nodes[m + 1] - nodes[m];

    for (size_t j = 1; j < N; ++j) {
      RVec gj = Nd * ((A[j - 1] + A[j]) * delta[j - 1] - (A[j] + A[j + 1]) * delta[j]);
      const CVec a = to_complex(delta[j - 1]), b = to_complex(delta[j]);
      for (int c = 0; c < D; ++c) {
        RVec xp = nodes[j], xm = nodes[j];
        xp[c] += s;
        xm[c] -= s;
        const CMat dG = (g.unchecked(to_complex(xp)) - g.unchecked(to_complex(xm))) / (2 * s);
        gj[c] += 0.5 * Nd * (hermitian_norm2(dG, a) + hermitian_norm2(dG, b));
      }
      grad[j - 1] = gj;
    }

    std::vector<RMat> Dg(N - 1), Up(N > 2 ? N - 2 : 0);
    for (size_t j = 1; j < N; ++j) {
      Dg[j - 1] = Nd * (A[j - 1] + 2 * A[j] + A[j + 1]);
      if (j + 1 < N) Up[j - 1] = -Nd * (A[j] + A[j + 1]);
    }
    std::vector<RVec> dir(N - 1);
    for (size_t j = 0; j + 1 < N; ++j) dir[j] = -grad[j];
    if (constraints.active_normals) {
      // Freeze motion along normals where descent pushes out of the feasible set.
      std::vector<RMat> Pi(N - 1, RMat::Identity(D, D));
      for (size_t j = 1; j < N; ++j)
        for (const RVec& nrm : constraints.active_normals(nodes[j]))
          if (grad[j - 1].dot(nrm) >= 0) Pi[j - 1] -= nrm * nrm.transpose();
      for (size_t j = 0; j + 1 < N; ++j) {
        Dg[j] = Pi[j] * Dg[j] * Pi[j] + (RMat::Identity(D, D) - Pi[j]);
        if (j + 2 < N) Up[j] = Pi[j] * Up[j] * Pi[j + 1];
        dir[j] = Pi[j] * dir[j];
      }
      block_thomas(Dg, Up, dir);
      for (size_t j = 0; j + 1 < N; ++j) dir[j] = Pi[j] * dir[j];
    } else {
      block_thomas(Dg, Up, dir);
    }

    double slope = 0, dmax = 0;
    for (size_t j = 0; j + 1 < N; ++j) {
      slope += grad[j].dot(dir[j]);
      dmax = std::max(dmax, dir[j].lpNorm<Eigen::Infinity>());
    }
    if (!(slope < 0)) {
      st.converged = true;
      break;
    }

    double t = 1;
    bool accepted = false;
    std::vector<RVec> trial = nodes;
    std::vector<CMat> Gt;
    double Et = E;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      for (size_t j = 1; j < N; ++j) {
        trial[j] = nodes[j] + t * dir[j - 1];
        if (constraints.project) trial[j] = constraints.project(trial[j]);
      }
      if (!admissible(g, chart, trial)) continue;
      if (constraints.segment_free) {
        bool crossed = false;
        for (size_t j = 1; j < N && !crossed; ++j)
          crossed = !constraints.segment_free(nodes[j], trial[j]);
        if (crossed) continue;
      }
      try {
        Gt = metric_at_nodes(g, trial, true);
      } catch (const LabError&) {
        continue;
      }
      Et = energy_from(Gt, trial);
      // Predicted change along the actual (possibly projected) displacement.
      double pred = 0;
      for (size_t j = 1; j < N; ++j) pred += grad[j - 1].dot(trial[j] - nodes[j]);
      if (pred < 0 && Et <= E + 1e-4 * pred) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Stalled at the noise floor of the metric derivatives.
      st.converged = -slope <= 1e-10 * E;
      break;
    }
    const double decrease = E - Et;
    nodes.swap(trial);
    G.swap(Gt);
    E = Et;
    st.energy_trace.push_back(E);
    if (t * dmax <= opts.tol * scale || decrease <= 1e-15 * E) {
      st.converged = true;
      break;
    }
  }
  return st;
}

namespace {

std::vector<RVec> chord(const RVec& a, const RVec& b, int N) {
  std::vector<RVec> nodes(N + 1);
  for (int m = 0; m <= N; ++m) nodes[m] = a + (b - a) * (static_cast<double>(m) / N);
  return nodes;
}

std::vector<RVec> refine(const std::vector<RVec>& nodes) {
  std::vector<RVec> out;
  out.reserve(2 * nodes.size() - 1);
  for (size_t m = 0; m + 1 < nodes.size(); ++m) {
    out.push_back(nodes[m]);
    out.push_back(0.5 * (nodes[m] + nodes[m + 1]));
  }
  out.push_back(nodes.back());
  return out;
}

}  // namespace

GeodesicSolution geodesic_distance(const core::HermitianMetricField& g, const CVec& p,
                                   const CVec& q, const GeodesicOptions& opts,
                                   const ComplexChart* chart) {
  if (p.size() != g.dimension() || q.size() != g.dimension())
    fail(ErrorKind::InvalidArgument, "endpoints have wrong dimension");
  if (opts.nodes < 4 || opts.starts < 1) fail(ErrorKind::InvalidArgument, "bad geodesic options");
  if (chart && (!chart->contains(p) || !chart->contains(q)))
    fail(ErrorKind::DomainExceeded, "geodesic endpoint outside the chart");
  g(p);
  g(q);
  GeodesicSolution sol;
  const RVec a = to_real(p), b = to_real(q);
  if ((a - b).norm() == 0) {
    sol.path.nodes = {a, b};
    sol.converged = true;
    return sol;
  }

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> N01;
  const int N = opts.nodes;
  const double amp0 = opts.perturbation * (a - b).norm();
  double bestE = std::numeric_limits<double>::infinity();
  std::vector<RVec> best;
  bool best_conv = false;
  for (int s = 0; s < opts.starts; ++s) {
    std::vector<RVec> nodes = chord(a, b, N);
    if (s > 0) {
      std::vector<RVec> dirs(3);
      for (auto& d : dirs) {
        d = RVec(a.size());
        for (Eigen::Index c = 0; c < d.size(); ++c) d[c] = N01(rng);
        d /= d.norm();
      }
      bool ok = false;
      for (double amp = amp0; amp > amp0 / 64; amp *= 0.5) {
        std::vector<RVec> trial = chord(a, b, N);
        for (int m = 1; m < N; ++m) {
          const double t = static_cast<double>(m) / N;
          for (int k = 0; k < 3; ++k)
            trial[m] += std::sin((k + 1) * std::numbers::pi * t) * (amp / (k + 1)) * dirs[k];
        }
        if (admissible(g, chart, trial)) {
          nodes = std::move(trial);
          ok = true;
          break;
        }
      }
      if (!ok) {
        sol.start_energies.push_back(std::numeric_limits<double>::infinity());
        continue;
      }
    }
    const DescentStats st = minimize_energy(g, nodes, opts, {}, chart);
    const double E = st.energy_trace.back();
    sol.start_energies.push_back(E);
    sol.iterations += st.iterations;
    if (E < bestE) {
      bestE = E;
      best = std::move(nodes);
      best_conv = st.converged;
      sol.best_start = s;
    }
  }

  double Estar = bestE, err = 0;
  if (opts.extrapolate) {
    std::vector<RVec> fine = refine(best);
    const DescentStats st = minimize_energy(g, fine, opts, {}, chart);
    const double E2 = st.energy_trace.back();
    sol.iterations += st.iterations;
    best_conv = best_conv && st.converged;
    Estar = (4 * E2 - bestE) / 3;
    err = std::abs(E2 - bestE) / 3;
    best = std::move(fine);
    bestE = E2;
  }
  sol.distance = std::sqrt(std::max(0.0, Estar));
  sol.error_bound = sol.distance > 0 ? err / (2 * sol.distance) : std::sqrt(err);
  sol.path.nodes = std::move(best);
  sol.path.energy = bestE;
  sol.converged = best_conv;
  return sol;
}

DistanceStrategy numeric_strategy(const core::HermitianMetricField& g, const GeodesicOptions& opts,
                                  std::optional<ComplexChart> chart) {
  return DistanceStrategy(
      DistanceStrategy::Kind::Numeric,
      [g, opts, chart](const CVec& p, const CVec& q) {
        const auto sol = geodesic_distance(g, p, q, opts, chart ? &*chart : nullptr);
        return DistanceValue{sol.distance, sol.error_bound};
      },
      "numeric-geodesic");
}

}  // namespace kahlerlab::geodesy
