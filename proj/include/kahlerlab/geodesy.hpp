#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "kahlerlab/chart.hpp"
#include "kahlerlab/kahler.hpp"
#include "kahlerlab/spaces.hpp"

namespace kahlerlab::geodesy {

// Nodes x_0..x_N at parameters m/N in real coordinates.
struct DiscretePath {
  std::vector<RVec> nodes;
  double energy = 0;
};

// Trapezoidal energy (N/2)·Σ Δ_mᵀ(A_m + A_{m+1})Δ_m; √E ≥ discrete length.
double path_energy(const core::HermitianMetricField& g, const std::vector<RVec>& nodes);
// Same quadrature without positivity checks (for perturbation fields).
double path_energy_unchecked(const core::HermitianMetricField& g, const std::vector<RVec>& nodes);
// Σ √(q_{G(midpoint)}(Δ_m)).
double path_length(const core::HermitianMetricField& g, const std::vector<RVec>& nodes);

struct GeodesicOptions {
  int nodes = 64;
  int starts = 4;
  int max_iter = 5000;
  double tol = 1e-10;  // relative step size at which descent stops
  std::uint64_t seed = 1;
  bool extrapolate = true;  // Richardson in N (N and 2N)
  double perturbation = 0.1;
  double fd_step = 1e-4;  // metric derivatives
};

struct DescentStats {
  int iterations = 0;
  bool converged = false;
  std::vector<double> energy_trace;
};

// Feasible set for constrained descent: a projection onto it and, at a
// boundary point, the unit normals pointing into it.
struct NodeConstraints {
  std::function<RVec(const RVec&)> project;
  std::function<std::vector<RVec>(const RVec&)> active_normals;
  // A step is rejected if some node moves through the complement (tunnelling
  // across a thin obstacle); paths clipping a corner are allowed.
  std::function<bool(const RVec&, const RVec&)> segment_free;
};

// Energy descent with a frozen-metric block-tridiagonal preconditioner; with
// constraints it is a projected Newton method on the active faces.
DescentStats minimize_energy(const core::HermitianMetricField& g, std::vector<RVec>& nodes,
                             const GeodesicOptions& opts, const NodeConstraints& constraints = {},
                             const ComplexChart* chart = nullptr);

struct GeodesicSolution {
  double distance = 0;
  double error_bound = 0;
  DiscretePath path;           // best path at the finest resolution
  std::vector<double> start_energies;
  int best_start = 0;
  bool converged = false;
  int iterations = 0;
};

GeodesicSolution geodesic_distance(const core::HermitianMetricField& g, const CVec& p,
                                   const CVec& q, const GeodesicOptions& opts = {},
                                   const ComplexChart* chart = nullptr);

DistanceStrategy numeric_strategy(const core::HermitianMetricField& g,
                                  const GeodesicOptions& opts = {},
                                  std::optional<ComplexChart> chart = std::nullopt);

// ---- length metric of a domain (obstacles removed from a box chart) ----

struct Obstacle {
  enum class Shape { Box, Ball };
  Shape shape = Shape::Box;
  RVec lo, hi;    // box
  RVec center;    // ball
  double radius = 0;

  static Obstacle box(RVec lo, RVec hi);
  static Obstacle ball(RVec center, double radius);
  bool contains(const RVec& x, double pad = 0) const;  // closed, padded
  RVec push_out(const RVec& x) const;
  // Normals (pointing away from the obstacle) of the faces x lies on.
  std::vector<RVec> active_normals(const RVec& x, double tol) const;
  bool segment_hits(const RVec& a, const RVec& b) const;  // meets the open interior
  // Shortest Euclidean a→b path avoiding the interior (planar; a, b outside).
  double detour_length(const RVec& a, const RVec& b) const;
};

struct Domain {
  ComplexChart chart = ComplexChart::whole(1);  // must be a box chart
  std::vector<Obstacle> obstacles;
  core::HermitianMetricField metric;

  bool contains(const CVec& z) const;
  bool segment_free(const RVec& a, const RVec& b) const;
};

struct DomainOptions {
  int grid = 0;  // points per axis; 0 → 256 for n = 1, 32 otherwise
  int nodes = 512;
  int max_iter = 3000;
};

struct DomainPath {
  double length = 0;
  double grid_length = 0;
  std::vector<RVec> nodes;
};

class DomainLengthMetric {
 public:
  DomainLengthMetric(Domain domain, DomainOptions opts = {});
  ~DomainLengthMetric();
  DomainLengthMetric(const DomainLengthMetric&) = delete;
  DomainLengthMetric& operator=(const DomainLengthMetric&) = delete;

  double operator()(const CVec& p, const CVec& q) const { return path(p, q).length; }
  DomainPath path(const CVec& p, const CVec& q) const;
  const Domain& domain() const { return domain_; }

 private:
  struct Tree;
  const Tree& tree_from(const CVec& p) const;
  Domain domain_;
  DomainOptions opts_;
  struct Cache;
  std::unique_ptr<Cache> cache_;
};

double domain_length_metric(const Domain& domain, const CVec& p, const CVec& q,
                            const DomainOptions& opts = {});

DistanceStrategy domain_strategy(std::shared_ptr<const DomainLengthMetric> metric);

}  // namespace kahlerlab::geodesy
