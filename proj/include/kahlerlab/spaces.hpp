#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "kahlerlab/chart.hpp"
#include "kahlerlab/kahler.hpp"
#include "kahlerlab/model_spaces.hpp"

namespace kahlerlab {

struct DistanceValue {
  double d = 0;
  double err = 0;
};

// How distances to a base point are computed.
class DistanceStrategy {
 public:
  enum class Kind { ClosedForm, Numeric, Domain };
  using Fn = std::function<DistanceValue(const CVec&, const CVec&)>;

  DistanceStrategy() = default;
  DistanceStrategy(Kind kind, Fn fn, std::string name);

  static DistanceStrategy closed_form(std::function<double(const CVec&, const CVec&)> d,
                                      std::string name);

  DistanceValue operator()(const CVec& p, const CVec& q) const { return fn_(p, q); }
  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  // Default PASS tolerance for comparison defects.
  double default_tolerance() const { return kind_ == Kind::ClosedForm ? 1e-6 : 5e-3; }
  explicit operator bool() const { return static_cast<bool>(fn_); }

 private:
  Kind kind_ = Kind::ClosedForm;
  Fn fn_;
  std::string name_;
};

// A chart of a (possibly singular) Kähler space with everything the checks need.
struct KahlerSpace {
  std::string name;
  int n = 1;
  ComplexChart chart = ComplexChart::whole(1);
  core::HermitianMetricField metric;
  core::ScalarField potential;  // may be empty (non-Kähler Hermitian metrics)
  DistanceStrategy distance;
  std::vector<Singularity> singular;
  double model_K = 0;       // for model spaces
  bool is_model = false;
};

KahlerSpace model_space(double K, int n);
KahlerSpace cone_space(double alpha);
// Orbifold ℂ/ℤ_k in the cone chart z = (w/k)^k.
KahlerSpace orbifold_space(int k);

}  // namespace kahlerlab
