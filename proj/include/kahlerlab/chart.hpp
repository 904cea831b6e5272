#pragma once

#include <limits>
#include <vector>

#include "kahlerlab/types.hpp"

namespace kahlerlab {

struct Singularity {
  CVec center;
  double radius = 0.0;  // 0 marks an isolated point
};

// Open region of ℂⁿ: a ball or a box in real coordinates, minus excluded sets.
class ComplexChart {
 public:
  enum class Shape { Ball, Box };

  static ComplexChart ball(int n, double radius, CVec center = CVec());
  static ComplexChart box(const RVec& lo, const RVec& hi);
  static ComplexChart whole(int n);

  int dimension() const { return n_; }
  Shape shape() const { return shape_; }
  double radius() const { return radius_; }
  const CVec& center() const { return center_; }
  const RVec& lo() const { return lo_; }
  const RVec& hi() const { return hi_; }
  const std::vector<Singularity>& excluded() const { return excluded_; }

  ComplexChart& exclude(Singularity s);

  bool contains(const CVec& z) const;
  // Euclidean distance from z to the chart boundary (negative outside).
  double boundary_margin(const CVec& z) const;
  double distance_to_excluded(const CVec& z) const;

 private:
  int n_ = 0;
  Shape shape_ = Shape::Ball;
  double radius_ = std::numeric_limits<double>::infinity();
  CVec center_;
  RVec lo_, hi_;
  std::vector<Singularity> excluded_;
};

}  // namespace kahlerlab
