#include "kahlerlab/spaces.hpp"

namespace kahlerlab {

DistanceStrategy::DistanceStrategy(Kind kind, Fn fn, std::string name)
    : kind_(kind), fn_(std::move(fn)), name_(std::move(name)) {}

DistanceStrategy DistanceStrategy::closed_form(std::function<double(const CVec&, const CVec&)> d,
                                               std::string name) {
  return DistanceStrategy(
      Kind::ClosedForm, [d](const CVec& p, const CVec& q) { return DistanceValue{d(p, q), 0.0}; },
      std::move(name));
}

KahlerSpace model_space(double K, int n) {
  const model::ModelSpace M{K, n};
  KahlerSpace s;
  s.name = "M_" + std::to_string(K);
  s.n = n;
  s.chart = M.chart();
  s.metric = M.closed_form_metric();
  s.potential = M.potential();
  s.distance = DistanceStrategy::closed_form(
      [K](const CVec& p, const CVec& q) { return model::model_distance(K, p, q); },
      "model-closed-form");
  s.model_K = K;
  s.is_model = true;
  return s;
}

KahlerSpace cone_space(double alpha) {
  const model::ConeSurface cone = model::make_cone(alpha);
  KahlerSpace s;
  s.name = "cone(" + std::to_string(alpha) + ")";
  s.n = 1;
  s.chart = ComplexChart::whole(1);
  s.chart.exclude({CVec::Zero(1), 0.0});
  s.metric = cone.metric();
  s.potential = cone.potential();
  s.distance = DistanceStrategy::closed_form(
      [cone](const CVec& p, const CVec& q) {
        return model::cone_distance(cone, model::to_polar(p), model::to_polar(q));
      },
      "cone-closed-form");
  s.singular = {{CVec::Zero(1), 0.0}};
  return s;
}

KahlerSpace orbifold_space(int k) {
  KahlerSpace s = cone_space(model::orbifold_cone(k).alpha);
  s.name = "orbifold(Z/" + std::to_string(k) + ")";
  return s;
}

}  // namespace kahlerlab
