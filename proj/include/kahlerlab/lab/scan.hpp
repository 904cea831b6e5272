#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "kahlerlab/holo_disk.hpp"
#include "kahlerlab/spaces.hpp"

namespace kahlerlab::lab {

struct ScanOptions {
  std::uint64_t seed = 1;
  int disks = 50;
  double size_min = 1e-3;
  double size_max = 0.3;
  double region_radius = 0.3;
  std::optional<CVec> center;  // defaults to p
  bool directed = true;        // try the violation disk first when BK < K at p
  double directed_eps2 = 5e-2;
  disk::QuadratureGrid grid;
  // Extra admissibility test on image points (obstacles of a domain).
  std::function<bool(const CVec&)> admissible;
};

struct ScanResult {
  disk::ComparisonReport worst;
  disk::DiskEmbedding worst_disk;
  int worst_index = -1;       // −1 for the directed disk
  std::vector<double> defects;  // sample order, directed disk first when used
  int disks_tested = 0;
  int disks_skipped = 0;
  bool directed_used = false;
  double min_bk = 0;          // at p, when computed
};

// Worst comparison defect over seeded affine and degree-2 disks.
ScanResult scan_disks(const KahlerSpace& space, const CVec& p, double K, const ScanOptions& opts = {});

}  // namespace kahlerlab::lab
