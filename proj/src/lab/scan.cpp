#include "kahlerlab/lab/scan.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "kahlerlab/model_spaces.hpp"
#include "kahlerlab/psh.hpp"

namespace kahlerlab::lab {

namespace {

constexpr double kPi = std::numbers::pi;

bool admissible_disk(const KahlerSpace& space, const disk::DiskEmbedding& d, const CVec& p,
                     double K, const ScanOptions& opts) {
  try {
    d.validate(space.chart, 48);
  } catch (const LabError&) {
    return false;
  }
  const double guard = K > 0 ? 0.45 * kPi / std::sqrt(2 * K) : std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 6; ++i)
    for (int t = 0; t < (i ? 48 : 1); ++t) {
      const CVec z = d(std::polar(i / 6.0, 2 * kPi * t / 48));
      for (const auto& s : space.singular)
        if ((z - s.center).norm() <= s.radius + 1e-2 * d.coefficients()[1].norm()) return false;
      if (opts.admissible && !opts.admissible(z)) return false;
      if (K > 0 && i == 6 && !(space.distance(p, z).d < guard)) return false;
    }
  return true;
}

}  // namespace

ScanResult scan_disks(const KahlerSpace& space, const CVec& p, double K, const ScanOptions& opts) {
  if (p.size() != space.n) fail(ErrorKind::InvalidArgument, "base point dimension");
  if (!(opts.size_min > 0) || !(opts.size_max >= opts.size_min))
    fail(ErrorKind::InvalidArgument, "need 0 < size_min ≤ size_max");
  ScanResult res;
  res.worst.defect = std::numeric_limits<double>::infinity();

  auto consider = [&](const disk::DiskEmbedding& d, int index) {
    disk::ComparisonReport rep;
    try {
      rep = disk::comparison_defect(space.metric, d, p, K, space.distance, opts.grid);
    } catch (const LabError& e) {
      if (e.kind() == ErrorKind::SingularityTooClose || e.kind() == ErrorKind::DomainExceeded) {
        ++res.disks_skipped;
        return;
      }
      throw;
    }
    ++res.disks_tested;
    res.defects.push_back(rep.defect);
    if (rep.defect < res.worst.defect) {
      res.worst = rep;
      res.worst_disk = d;
      res.worst_index = index;
    }
  };

  if (opts.directed && space.metric.clearance(p) > 0.1) {
    const core::CurvatureData R = core::curvature_tensor(space.metric, p);
    core::MinBkOptions mo;
    mo.seed = opts.seed;
    const core::MinBkResult mb = core::min_bk_defect(R, K, mo);
    res.min_bk = mb.value;
    if (mb.value < -1e-6) {
      const double e2 = opts.directed_eps2;
      const disk::DiskEmbedding d = disk::violation_disk(p, mb.pair, e2 / 10, e2);
      if (admissible_disk(space, d, p, K, opts)) {
        res.directed_used = true;
        consider(d, -1);
      }
    }
  }

  const CVec center = opts.center ? *opts.center : p;
  for (int i = 0; i < opts.disks; ++i) {
    for (int attempt = 0; attempt < 50; ++attempt) {
      const disk::DiskEmbedding d =
          psh::random_disk(opts.seed ^ 0x5ca9, i * 1000 + attempt, center, opts.region_radius,
                           opts.size_min, opts.size_max, true);
      if (!admissible_disk(space, d, p, K, opts)) continue;
      consider(d, i);
      break;
    }
  }
  if (res.disks_tested == 0) fail(ErrorKind::InvalidArgument, "no admissible disk in the scan region");
  return res;
}

}  // namespace kahlerlab::lab
