#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kahlerlab/holo_disk.hpp"
#include "kahlerlab/model_spaces.hpp"
#include "kahlerlab/spaces.hpp"

namespace kahlerlab::psh {

// Laplacian in w of f∘i, 5-point stencil with one Richardson step.
double disk_laplacian(const std::function<double(const CVec&)>& f, const disk::DiskEmbedding& disk,
                      cplx w, double h = 1e-2);

struct SamplerConfig {
  std::uint64_t seed = 1;
  int disks = 50;              // apex-avoiding disks, pointwise test
  int crossing_disks = 0;      // disks through singular points, distributional test
  int points_per_disk = 13;    // interior evaluation points
  double size_min = 0.02;
  double size_max = 0.3;
  double region_radius = 0.5;  // disk centers within this distance of `center`
  std::optional<CVec> center;  // defaults to the base point
  bool degree2 = true;
  double h = 1e-2;             // disk-coordinate stencil
  double tol = 1e-6;           // PASS if normalized minimum ≥ −tol
  double dist_tol = 1e-3;      // distributional pairing tolerance
};

struct Witness {
  std::vector<CVec> disk_coefficients;
  cplx point = 0;
  int disk_index = -1;
  bool distributional = false;
};

struct PshVerdict {
  bool pass = true;
  double min_value = 0;          // normalized Laplacian / pairing ratio at the witness
  double min_distributional = 0;
  Witness witness;
  std::uint64_t seed = 0;
  int disks_tested = 0;
  int points_tested = 0;
  int distributional_tested = 0;
  double potential_check = 0;    // max relative mismatch of 2∂∂̄φ against the metric
};

// F = φ − d²_{K,p}/2; pointwise normalized Laplacian ΔF/(2·density) on random
// disks, and ∫F Δχ / ∫φ Δχ for bumps χ on disks through singular points.
PshVerdict check_bk_lower(const KahlerSpace& space, const CVec& p, double K,
                          const SamplerConfig& cfg = {});

// S is a finite set of points or a complex line {base + t·dir}.
struct PointSet {
  std::vector<CVec> points;
  std::optional<std::pair<CVec, CVec>> line;
  double distance(const KahlerSpace& space, const CVec& z) const;
};

PshVerdict check_bk_lower_set(const KahlerSpace& space, const PointSet& S, double K,
                              const SamplerConfig& cfg = {});

struct RadialReport {
  double max_abs_residual = 0;  // |Δφ − 2 r^{−2α}| / (2 r^{−2α})
  double max_potential_mismatch = 0;
  int samples = 0;
  bool pass = false;
};

RadialReport radial_potential_check(const model::ConeSurface& cone, int samples = 200,
                                    double tol = 1e-4);

struct QuotientReport {
  PshVerdict verdict;
  double min_levi_eigenvalue = 0;  // of ½log h − d²_{2,z′}/2 on the sampled points
};

// ½ log h − d²_{2,z′}/2 on the affine chart of ℂP^{n−1}.
QuotientReport quotient_bk2_check(const model::QuotientData& q, const CVec& zprime,
                                  const SamplerConfig& cfg = {});

struct ThresholdStep {
  double K = 0;
  bool pass = false;
  double min_value = 0;
};

struct ThresholdResult {
  double K = 0;
  double lo = 0, hi = 0;
  std::vector<ThresholdStep> trace;
};

// Largest K with a PASS, by bisection on [lo, hi] to the given resolution.
ThresholdResult k_threshold(const KahlerSpace& space, const CVec& p, double lo, double hi,
                            const SamplerConfig& cfg = {}, double resolution = 1e-3);

// Random disks in a region, for the samplers and the scanner.
disk::DiskEmbedding random_disk(std::uint64_t seed, int index, const CVec& center,
                                double region_radius, double size_min, double size_max,
                                bool degree2);

}  // namespace kahlerlab::psh
