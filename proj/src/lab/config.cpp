#include "kahlerlab/lab/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "kahlerlab/lab/expression.hpp"

namespace kahlerlab::lab {

using nlohmann::json;

namespace {

// Maps field paths ("scenarios[0].space.kind") to 1-based source lines.
class LineIndex {
 public:
  explicit LineIndex(const std::string& text) { scan(text); }

  int line(const std::string& path) const {
    auto it = lines_.find(path);
    return it == lines_.end() ? 0 : it->second;
  }

 private:
  struct Frame {
    bool object;
    std::string path;
    std::string key;
    int index = -1;
  };

  void scan(const std::string& s) {
    std::vector<Frame> stack;
    int line = 1;
    bool expect_key = false;
    auto value_path = [&]() -> std::string {
      if (stack.empty()) return "";
      const Frame& f = stack.back();
      if (f.object) return f.path.empty() ? f.key : f.path + "." + f.key;
      return f.path + "[" + std::to_string(f.index) + "]";
    };
    auto begin_value = [&]() -> std::string {
      if (!stack.empty() && !stack.back().object) ++stack.back().index;
      std::string p = value_path();
      if (!lines_.count(p)) lines_[p] = line;
      return p;
    };
    for (size_t i = 0; i < s.size(); ++i) {
      const char c = s[i];
      if (c == '\n') {
        ++line;
      } else if (c == '"') {
        size_t j = i + 1;
        std::string str;
        while (j < s.size() && s[j] != '"') {
          if (s[j] == '\\' && j + 1 < s.size()) ++j;
          if (s[j] == '\n') ++line;
          str += s[j++];
        }
        if (expect_key && !stack.empty() && stack.back().object) {
          stack.back().key = str;
          expect_key = false;
        } else {
          begin_value();
        }
        i = j;
      } else if (c == '{' || c == '[') {
        const std::string p = begin_value();
        stack.push_back({c == '{', p, "", -1});
        expect_key = c == '{';
      } else if (c == '}' || c == ']') {
        if (!stack.empty()) stack.pop_back();
        expect_key = false;
      } else if (c == ',') {
        expect_key = !stack.empty() && stack.back().object;
      } else if (c == ':' || std::isspace(static_cast<unsigned char>(c))) {
      } else {
        begin_value();
        while (i + 1 < s.size() && std::string(",}]\n \t\r").find(s[i + 1]) == std::string::npos) ++i;
      }
    }
  }

  std::map<std::string, int> lines_;
};

struct Ctx {
  std::string source;
  const LineIndex* lines = nullptr;

  [[noreturn]] void error(const std::string& path, const std::string& msg) const {
    std::string where = source;
    const int ln = lines ? lines->line(path) : 0;
    if (ln > 0) where += ":" + std::to_string(ln);
    if (!path.empty()) where += (where.empty() ? "" : ": ") + path;
    fail(ErrorKind::ConfigError, where.empty() ? msg : where + ": " + msg);
  }
};

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Strict view of one JSON object: every key must be consumed.
class Obj {
 public:
  Obj(const Ctx& ctx, const json& j, std::string path) : ctx_(ctx), j_(j), path_(std::move(path)) {
    if (!j_.is_object()) ctx_.error(path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    if (!j_.contains(key)) ctx_.error(path_, "missing key '" + key + "'");
    used_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) ctx_.error(join(path_, key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) ctx_.error(join(path_, key), "must be finite");
    return x;
  }
  double number(const std::string& key, double def) { return has(key) ? number(key) : def; }

  long long integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer()) ctx_.error(join(path_, key), "expected an integer");
    return v.get<long long>();
  }
  long long integer(const std::string& key, long long def) { return has(key) ? integer(key) : def; }

  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) ctx_.error(join(path_, key), "expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& def) {
    return has(key) ? string(key) : def;
  }

  bool boolean(const std::string& key, bool def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_boolean()) ctx_.error(join(path_, key), "expected true or false");
    return v.get<bool>();
  }

  const std::string& path() const { return path_; }
  std::string path(const std::string& key) const { return join(path_, key); }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!used_.count(k)) ctx_.error(join(path_, k), "unknown key");
  }

 private:
  const Ctx& ctx_;
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

int positive_int(const Ctx& ctx, Obj& o, const std::string& key, long long def, long long max) {
  const long long v = o.integer(key, def);
  if (v < 1 || v > max) ctx.error(o.path(key), "must be in [1, " + std::to_string(max) + "]");
  return static_cast<int>(v);
}

RVec real_vector(const Ctx& ctx, const json& j, const std::string& path, int size) {
  if (!j.is_array() || static_cast<int>(j.size()) != size)
    ctx.error(path, "expected an array of " + std::to_string(size) + " numbers");
  RVec v(size);
  for (int i = 0; i < size; ++i) {
    if (!j[i].is_number()) ctx.error(path + "[" + std::to_string(i) + "]", "expected a number");
    v[i] = j[i].get<double>();
  }
  return v;
}

SamplerSpec parse_sampler(const Ctx& ctx, const json& j, const std::string& path) {
  Obj o(ctx, j, path);
  SamplerSpec s;
  const long long seed = o.integer("seed", 1);
  if (seed < 0) ctx.error(o.path("seed"), "must be nonnegative");
  s.seed = static_cast<std::uint64_t>(seed);
  s.disks = positive_int(ctx, o, "disks", s.disks, 100000);
  s.crossing_disks = static_cast<int>(o.integer("crossing_disks", 0));
  if (s.crossing_disks < 0) ctx.error(o.path("crossing_disks"), "must be nonnegative");
  s.points_per_disk = positive_int(ctx, o, "points_per_disk", s.points_per_disk, 1000);
  s.size_min = o.number("size_min", s.size_min);
  s.size_max = o.number("size_max", s.size_max);
  if (!(s.size_min > 0) || !(s.size_max >= s.size_min))
    ctx.error(path, "need 0 < size_min ≤ size_max");
  s.region_radius = o.number("region_radius", s.region_radius);
  if (!(s.region_radius >= 0)) ctx.error(o.path("region_radius"), "must be nonnegative");
  s.degree2 = o.boolean("degree2", s.degree2);
  o.finish();
  return s;
}

// Keys each check accepts besides "check", "id", "expect" and "tol".
const std::map<std::string, std::set<std::string>>& check_schema() {
  static const std::map<std::string, std::set<std::string>> schema = {
      {"curvature-match", {"points", "radius", "seed"}},
      {"min-bk-defect", {"K", "p", "samples"}},
      {"comparison-scan", {"K", "p", "center", "disks", "size_min", "size_max", "directed"}},
      {"violation-study", {"K", "p", "eps1", "eps2", "a", "b"}},
      {"annulus", {"K", "p", "eps", "eps1", "eps2"}},
      {"psh", {"K", "p", "center"}},
      {"psh-set", {"K", "points", "line", "center"}},
      {"radial-potential", {"samples"}},
      {"quotient-bk2", {"zprime"}},
      {"domain-compare", {"p", "q", "center", "disks", "size_min", "size_max", "min_ratio"}},
      {"k-threshold", {"p", "lo", "hi", "resolution"}},
  };
  return schema;
}

// Space kinds each check is valid for.
bool valid_for(const std::string& check, const std::string& space) {
  static const std::map<std::string, std::set<std::string>> valid = {
      {"curvature-match", {"model"}},
      {"min-bk-defect", {"model", "potential", "torsion"}},
      {"comparison-scan", {"model", "potential", "torsion", "cone", "orbifold"}},
      {"violation-study", {"model", "potential", "torsion"}},
      {"annulus", {"model", "potential"}},
      {"psh", {"model", "potential", "cone", "orbifold"}},
      {"psh-set", {"model", "potential", "cone", "orbifold"}},
      {"radial-potential", {"cone", "orbifold"}},
      {"quotient-bk2", {"quotient"}},
      {"domain-compare", {"domain"}},
      {"k-threshold", {"model", "potential", "cone", "orbifold"}},
  };
  auto it = valid.find(check);
  return it != valid.end() && it->second.count(space);
}

// Required keys per check.
const std::map<std::string, std::set<std::string>>& check_required() {
  static const std::map<std::string, std::set<std::string>> req = {
      {"min-bk-defect", {"K", "p"}},  {"comparison-scan", {"K", "p"}},
      {"violation-study", {"K", "eps2"}}, {"annulus", {"K", "p", "eps"}},
      {"psh", {"K", "p"}},            {"psh-set", {"K"}},
      {"quotient-bk2", {"zprime"}},   {"domain-compare", {"p", "q"}},
      {"k-threshold", {"p", "lo", "hi"}},
  };
  return req;
}

CheckSpec parse_check(const Ctx& ctx, const json& j, const std::string& path,
                      const std::string& space_kind) {
  if (!j.is_object()) ctx.error(path, "expected an object");
  CheckSpec c;
  if (!j.contains("check") || !j["check"].is_string()) ctx.error(path, "missing string key 'check'");
  c.kind = j["check"].get<std::string>();
  const auto& schema = check_schema();
  auto it = schema.find(c.kind);
  if (it == schema.end()) ctx.error(join(path, "check"), "unknown check '" + c.kind + "'");
  if (!valid_for(c.kind, space_kind))
    ctx.error(join(path, "check"), "check '" + c.kind + "' is not valid for space kind '" +
                                       space_kind + "'");
  c.id = c.kind;
  c.params = json::object();
  for (const auto& [k, v] : j.items()) {
    const std::string kp = join(path, k);
    if (k == "check") continue;
    if (k == "id") {
      if (!v.is_string() || v.get<std::string>().empty()) ctx.error(kp, "expected a nonempty string");
      c.id = v.get<std::string>();
    } else if (k == "expect") {
      const std::string e = v.is_string() ? v.get<std::string>() : "";
      if (e == "PASS")
        c.expect = Expect::Pass;
      else if (e == "FAIL")
        c.expect = Expect::Fail;
      else
        ctx.error(kp, "expected \"PASS\" or \"FAIL\"");
    } else if (k == "tol") {
      if (!v.is_number() || !(v.get<double>() >= 0)) ctx.error(kp, "expected a nonnegative number");
      c.tol = v.get<double>();
    } else if (it->second.count(k)) {
      c.params[k] = v;
    } else {
      ctx.error(kp, "unknown key for check '" + c.kind + "'");
    }
  }
  static const std::set<std::string> numbers = {"K", "eps", "eps1", "lo", "hi", "resolution",
                                                "radius", "min_ratio", "size_min", "size_max"};
  static const std::set<std::string> integers = {"points", "seed", "samples", "disks"};
  static const std::set<std::string> points = {"p", "q", "center", "zprime", "a", "b"};
  for (const auto& [k, v] : c.params.items()) {
    const std::string kp = join(path, k);
    if (numbers.count(k) && !(v.is_number() && std::isfinite(v.get<double>())))
      ctx.error(kp, "expected a number");
    const bool point_list = k == "points" && c.kind == "psh-set";
    if (integers.count(k) && !point_list && !(v.is_number_integer() && v.get<long long>() >= 0))
      ctx.error(kp, "expected a nonnegative integer");
    if (points.count(k)) {
      try {
        parse_point(v, kp);
      } catch (const LabError&) {
        ctx.error(kp, "expected a point: [re, ...] or [[re, im], ...]");
      }
    }
    if (k == "directed" && !v.is_boolean()) ctx.error(kp, "expected true or false");
    if (k == "eps2") {
      if (!v.is_array() || v.empty()) ctx.error(kp, "expected a nonempty list of numbers");
      for (const auto& e : v)
        if (!e.is_number() || !(e.get<double>() > 0) || !(e.get<double>() < 1))
          ctx.error(kp, "entries must be numbers in (0, 1)");
    }
    if (point_list) {
      if (!v.is_array()) ctx.error(kp, "expected a list of points");
      for (const auto& e : v) try {
          parse_point(e, kp);
        } catch (const LabError&) {
          ctx.error(kp, "expected a list of points");
        }
    }
  }
  if (c.kind == "psh-set" && !c.params.contains("points") && !c.params.contains("line"))
    ctx.error(path, "psh-set needs 'points' or 'line'");
  auto req = check_required().find(c.kind);
  if (req != check_required().end())
    for (const auto& k : req->second)
      if (!c.params.contains(k)) ctx.error(path, "missing key '" + k + "'");
  return c;
}

void validate_space(const Ctx& ctx, const json& j, const std::string& path) {
  // Everything is checked by building the space once; wrap errors with the path.
  try {
    build_space(j);
  } catch (const LabError& e) {
    std::string msg = e.what();
    const std::string prefix = "ConfigError: ";
    if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
    ctx.error(path, msg);
  }
}

}  // namespace

std::string to_string(Expect e) { return e == Expect::Pass ? "PASS" : "FAIL"; }

CVec parse_point(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    fail(ErrorKind::ConfigError, where + ": expected a nonempty array of coordinates");
  CVec z(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    const json& c = j[i];
    if (c.is_number()) {
      z[static_cast<Eigen::Index>(i)] = c.get<double>();
    } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
      z[static_cast<Eigen::Index>(i)] = cplx(c[0].get<double>(), c[1].get<double>());
    } else {
      fail(ErrorKind::ConfigError,
           where + "[" + std::to_string(i) + "]: expected a number or [re, im]");
    }
  }
  return z;
}

SpaceBundle build_space(const json& spec) {
  Ctx ctx{"", nullptr};
  Obj o(ctx, spec, "");
  SpaceBundle b;
  b.kind = o.string("kind");
  auto bad = [](const std::string& msg) { fail(ErrorKind::ConfigError, msg); };

  if (b.kind == "model") {
    const double K = o.number("K");
    const int n = positive_int(ctx, o, "n", 1, 16);
    const std::string dist = o.string("distance", "closed-form");
    b.space = model_space(K, n);
    b.model = model::ModelSpace{K, n};
    if (dist == "numeric") {
      b.space.distance = geodesy::numeric_strategy(b.space.metric, {}, b.space.chart);
    } else if (dist != "closed-form") {
      bad("distance: expected \"closed-form\" or \"numeric\"");
    }
  } else if (b.kind == "potential") {
    const int n = positive_int(ctx, o, "n", 1, 16);
    const std::string expr = o.string("expr");
    const double radius = o.number("radius", std::numeric_limits<double>::infinity());
    std::vector<Singularity> sing;
    if (o.has("singular")) {
      const json& s = o.raw("singular");
      if (!s.is_array()) bad("singular: expected an array of points");
      for (size_t i = 0; i < s.size(); ++i) {
        const CVec z = parse_point(s[i], "singular[" + std::to_string(i) + "]");
        if (z.size() != n) bad("singular: point dimension");
        sing.push_back({z, 0.0});
      }
    }
    core::ScalarField phi(compile_expression(expr, n), expr, sing);
    KahlerSpace& s = b.space;
    s.name = "potential";
    s.n = n;
    s.chart = std::isfinite(radius) ? ComplexChart::ball(n, radius) : ComplexChart::whole(n);
    for (const auto& x : sing) s.chart.exclude(x);
    s.potential = phi;
    s.metric = core::HermitianMetricField::from_potential(phi, n);
    s.singular = sing;
    s.distance = geodesy::numeric_strategy(s.metric, {}, s.chart);
  } else if (b.kind == "cone") {
    const double alpha = o.number("alpha");
    if (!(alpha < 1)) bad("alpha: must be < 1");
    b.space = cone_space(alpha);
    b.cone = model::make_cone(alpha);
  } else if (b.kind == "orbifold") {
    const long long k = o.integer("k");
    if (k < 1 || k > 64) bad("k: must be in [1, 64]");
    b.space = orbifold_space(static_cast<int>(k));
    b.cone = model::orbifold_cone(static_cast<int>(k));
  } else if (b.kind == "quotient") {
    const int n = positive_int(ctx, o, "n", 2, 16);
    if (n < 2) bad("n: must be at least 2");
    model::QuotientData q = model::round_quotient(n);
    q.delta = o.number("delta", 1.0);
    if (!(q.delta > 0)) bad("delta: must be positive");
    const double t = o.number("perturbation", 0.0);
    if (t < 0) bad("perturbation: must be nonnegative");
    if (t > 0) q.log_H = [t](const CVec& z) { const double a = z.squaredNorm(); return -0.5 * std::log1p(t * a * a); };
    b.quotient = q;
    b.kahler = true;
    b.space.name = "quotient";
    b.space.n = n - 1;
  } else if (b.kind == "torsion") {
    const int n = positive_int(ctx, o, "n", 2, 8);
    const double radius = o.number("radius", 0.5);
    if (!(radius > 0)) bad("radius: must be positive");
    disk::TorsionTensor T(n);
    const json& comps = o.raw("components");
    if (!comps.is_array() || comps.empty()) bad("components: expected a nonempty array");
    for (size_t c = 0; c < comps.size(); ++c) {
      const std::string p = "components[" + std::to_string(c) + "]";
      Obj e(ctx, comps[c], p);
      const long long i = e.integer("i"), j = e.integer("j"), k = e.integer("k");
      if (i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n) bad(p + ": index out of range");
      if (j == k) bad(p + ": j and k must differ (antisymmetric)");
      const CVec v = parse_point(json::array({e.raw("value")}), p + ".value");
      e.finish();
      T.set(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k), v[0]);
    }
    KahlerSpace& s = b.space;
    s.name = "torsion";
    s.n = n;
    s.chart = ComplexChart::ball(n, radius);
    s.metric = disk::torsion_metric(T, s.chart);
    s.distance = geodesy::numeric_strategy(s.metric, {}, s.chart);
    b.torsion = T;
    b.kahler = false;
  } else if (b.kind == "domain") {
    const json& lo = o.raw("lo");
    if (!lo.is_array() || lo.empty() || lo.size() % 2) bad("lo: expected 2n numbers");
    const int dim = static_cast<int>(lo.size());
    const RVec L = real_vector(ctx, lo, "lo", dim), H = real_vector(ctx, o.raw("hi"), "hi", dim);
    if (!((H - L).minCoeff() > 0)) bad("hi must exceed lo in every coordinate");
    geodesy::Domain d;
    d.chart = ComplexChart::box(L, H);
    const int n = dim / 2;
    d.metric = core::HermitianMetricField::direct([n](const CVec&) { return CMat::Identity(n, n); },
                                                  n, "flat");
    if (o.has("obstacles")) {
      const json& obs = o.raw("obstacles");
      if (!obs.is_array()) bad("obstacles: expected an array");
      for (size_t i = 0; i < obs.size(); ++i) {
        const std::string p = "obstacles[" + std::to_string(i) + "]";
        Obj e(ctx, obs[i], p);
        const std::string shape = e.string("shape");
        if (shape == "box") {
          const RVec a = real_vector(ctx, e.raw("lo"), p + ".lo", dim);
          const RVec c = real_vector(ctx, e.raw("hi"), p + ".hi", dim);
          if (!((c - a).minCoeff() > 0)) bad(p + ": hi must exceed lo");
          d.obstacles.push_back(geodesy::Obstacle::box(a, c));
        } else if (shape == "ball") {
          const RVec c = real_vector(ctx, e.raw("center"), p + ".center", dim);
          const double r = e.number("radius");
          if (!(r > 0)) bad(p + ".radius: must be positive");
          d.obstacles.push_back(geodesy::Obstacle::ball(c, r));
        } else {
          bad(p + ".shape: expected \"box\" or \"ball\"");
        }
        e.finish();
      }
    }
    geodesy::DomainOptions opts;
    opts.grid = static_cast<int>(o.integer("grid", 0));
    if (opts.grid < 0) bad("grid: must be nonnegative");
    auto metric = std::make_shared<const geodesy::DomainLengthMetric>(d, opts);
    b.domain = std::shared_ptr<const geodesy::Domain>(metric, &metric->domain());
    KahlerSpace& s = b.space;
    s.name = "domain";
    s.n = n;
    s.chart = d.chart;
    s.metric = d.metric;
    s.potential = core::ScalarField([](const CVec& z) { return 0.5 * z.squaredNorm(); }, "|z|²/2");
    s.distance = geodesy::domain_strategy(metric);
  } else {
    bad("kind: unknown space kind '" + b.kind + "'");
  }
  o.finish();
  return b;
}

Config parse_config(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // Byte offset → line.
    const size_t off = std::min<size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(off), '\n'));
    fail(ErrorKind::ConfigError, source + ":" + std::to_string(line) + ": invalid JSON: " + e.what());
  }
  const LineIndex lines(text);
  const Ctx ctx{source, &lines};
  Obj o(ctx, root, "");
  Config cfg;
  cfg.source = source;
  cfg.version = static_cast<int>(o.integer("version"));
  if (cfg.version != kConfigVersion)
    ctx.error("version", "unsupported version " + std::to_string(cfg.version));
  const json& scen = o.raw("scenarios");
  if (!scen.is_array() || scen.empty()) ctx.error("scenarios", "expected a nonempty array");
  std::set<std::string> ids;
  for (size_t i = 0; i < scen.size(); ++i) {
    const std::string path = "scenarios[" + std::to_string(i) + "]";
    Obj s(ctx, scen[i], path);
    Scenario sc;
    sc.id = s.string("id");
    if (sc.id.empty() || sc.id.find_first_of(",\"\n\r") != std::string::npos)
      ctx.error(s.path("id"), "ids must be nonempty and free of commas, quotes and newlines");
    if (!ids.insert(sc.id).second) ctx.error(s.path("id"), "duplicate scenario id '" + sc.id + "'");
    s.string("description", "");
    sc.space_spec = s.raw("space");
    if (!sc.space_spec.is_object() || !sc.space_spec.contains("kind"))
      ctx.error(s.path("space"), "expected an object with a 'kind'");
    validate_space(ctx, sc.space_spec, s.path("space"));
    const std::string kind = sc.space_spec["kind"].get<std::string>();
    if (s.has("sampler")) sc.sampler = parse_sampler(ctx, s.raw("sampler"), s.path("sampler"));
    if (s.has("tolerances")) {
      Obj t(ctx, s.raw("tolerances"), s.path("tolerances"));
      if (t.has("pass")) sc.tol = t.number("pass");
      if (t.has("distributional")) sc.dist_tol = t.number("distributional");
      t.finish();
    }
    const json& checks = s.raw("checks");
    if (!checks.is_array() || checks.empty()) ctx.error(s.path("checks"), "expected a nonempty array");
    std::set<std::string> cids;
    for (size_t c = 0; c < checks.size(); ++c) {
      const std::string cp = s.path("checks") + "[" + std::to_string(c) + "]";
      CheckSpec chk = parse_check(ctx, checks[c], cp, kind);
      if (!cids.insert(chk.id).second)
        ctx.error(cp, "duplicate check id '" + chk.id + "' (set \"id\")");
      if (chk.id.find_first_of(",\"\n\r") != std::string::npos)
        ctx.error(cp + ".id", "ids must be free of commas, quotes and newlines");
      sc.checks.push_back(std::move(chk));
    }
    s.finish();
    cfg.scenarios.push_back(std::move(sc));
  }
  o.finish();
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace kahlerlab::lab
