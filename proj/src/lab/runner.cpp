#include "kahlerlab/lab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include <spdlog/spdlog.h>

#include "kahlerlab/holo_disk.hpp"
#include "kahlerlab/lab/scan.hpp"
#include "kahlerlab/psh.hpp"

namespace kahlerlab::lab {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

json to_json(const CVec& z) {
  json a = json::array();
  for (Eigen::Index i = 0; i < z.size(); ++i) a.push_back({z[i].real(), z[i].imag()});
  return a;
}

json to_json(const std::vector<CVec>& coeffs) {
  json a = json::array();
  for (const auto& c : coeffs) a.push_back(to_json(c));
  return a;
}

double num(const json& params, const std::string& key, double def) {
  return params.contains(key) ? params.at(key).get<double>() : def;
}

int integer(const json& params, const std::string& key, int def) {
  if (!params.contains(key)) return def;
  if (!params.at(key).is_number_integer()) fail(ErrorKind::ConfigError, key + ": expected an integer");
  return params.at(key).get<int>();
}

CVec point(const json& params, const std::string& key, int n) {
  const CVec z = parse_point(params.at(key), key);
  if (z.size() != n) fail(ErrorKind::ConfigError, key + ": expected dimension " + std::to_string(n));
  return z;
}

struct Outcome {
  bool pass = true;
  double value = 0;
  double error_est = 0;
  std::uint64_t seed = 0;
  json witness;  // null unless there is something to re-derive
  json details = json::object();
};

struct Series {
  json ratio_curves = json::array();
  json threshold_traces = json::array();
  json defect_samples = json::array();
};

struct Job {
  const Scenario& sc;
  const RunOptions& opts;
  Series& series;
  const CheckSpec* check = nullptr;

  std::uint64_t seed() const { return opts.seed ? *opts.seed : sc.sampler.seed; }

  double tol(double def) const {
    if (opts.tol) return *opts.tol;
    if (check->tol) return *check->tol;
    if (sc.tol) return *sc.tol;
    return def;
  }

  psh::SamplerConfig sampler() const {
    psh::SamplerConfig c;
    c.seed = seed();
    c.disks = sc.sampler.disks;
    c.crossing_disks = sc.sampler.crossing_disks;
    c.points_per_disk = sc.sampler.points_per_disk;
    c.size_min = sc.sampler.size_min;
    c.size_max = sc.sampler.size_max;
    c.region_radius = sc.sampler.region_radius;
    c.degree2 = sc.sampler.degree2;
    c.tol = tol(c.tol);
    if (sc.dist_tol) c.dist_tol = *sc.dist_tol;
    return c;
  }
};

Outcome from_verdict(const psh::PshVerdict& v) {
  Outcome o;
  o.pass = v.pass;
  // The value reported is the one behind the verdict.
  o.value = !v.pass && v.witness.distributional ? v.min_distributional : v.min_value;
  o.seed = v.seed;
  o.details = {{"disks", v.disks_tested},
               {"points", v.points_tested},
               {"distributional_tests", v.distributional_tested},
               {"min_distributional", v.min_distributional},
               {"potential_mismatch", v.potential_check}};
  if (!v.pass)
    o.witness = {{"seed", v.seed},
                 {"disk", to_json(v.witness.disk_coefficients)},
                 {"w", {v.witness.point.real(), v.witness.point.imag()}},
                 {"disk_index", v.witness.disk_index},
                 {"distributional", v.witness.distributional}};
  return o;
}

Outcome curvature_match(const SpaceBundle& b, const Job& job) {
  const json& P = job.check->params;
  const int count = integer(P, "points", 50);
  const double radius = num(P, "radius", 0.5);
  const std::uint64_t seed = P.contains("seed") ? P["seed"].get<std::uint64_t>() : job.seed();
  const model::ModelSpace& M = *b.model;
  const core::HermitianMetricField g = M.metric();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N01;
  std::uniform_real_distribution<double> U(0, 1);
  Outcome o;
  o.seed = seed;
  double worst = 0;
  CVec worst_z;
  for (int s = 0; s < count; ++s) {
    CVec z(M.n);
    for (int k = 0; k < M.n; ++k) z[k] = cplx(N01(rng), N01(rng));
    z *= radius * std::pow(U(rng), 1.0 / (2 * M.n)) / z.norm();
    const core::CurvatureData num_R = core::curvature_tensor(g, z);
    const core::CurvatureTensor exact = M.curvature_at(z);
    double diff = 0;
    const int n = M.n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) diff = std::max(diff, std::abs(num_R.R(i, j, k, l) - exact(i, j, k, l)));
    const double rel = diff / exact.max_abs();
    if (rel > worst) {
      worst = rel;
      worst_z = z;
    }
  }
  o.value = worst;
  o.pass = worst <= job.tol(1e-5);
  o.details = {{"points", count}, {"radius", radius}};
  if (!o.pass) o.witness = {{"seed", seed}, {"point", to_json(worst_z)}};
  return o;
}

Outcome min_bk(const SpaceBundle& b, const Job& job) {
  const json& P = job.check->params;
  const CVec p = point(P, "p", b.space.n);
  const double K = num(P, "K", 0);
  core::MinBkOptions mo;
  mo.seed = job.seed();
  mo.samples = integer(P, "samples", mo.samples);
  const core::CurvatureData R = core::curvature_tensor(b.space.metric, p);
  const core::MinBkResult r = core::min_bk_defect(R, K, mo);
  Outcome o;
  o.seed = r.seed;
  o.value = r.value;
  o.pass = r.value >= -job.tol(1e-6);
  o.details = {{"samples", r.samples}, {"line_search_failures", r.line_search_failures},
               {"kahler_defect", R.kahler_defect}};
  if (!o.pass) o.witness = {{"seed", r.seed}, {"p", to_json(p)}, {"X", to_json(r.pair.X)}, {"Y", to_json(r.pair.Y)}};
  return o;
}

void record_defects(Series& s, const Job& job, const std::vector<double>& defects) {
  json d = json::array();
  for (double v : defects) d.push_back(v);
  s.defect_samples.push_back({{"scenario_id", job.sc.id}, {"check_id", job.check->id}, {"defects", d}});
}

Outcome from_scan(const ScanResult& r, const Job& job, double tol, std::uint64_t seed) {
  Outcome o;
  o.seed = seed;
  o.value = r.worst.defect;
  o.error_est = r.worst.error_estimate;
  o.pass = r.worst.defect >= -tol;
  o.details = {{"disks", r.disks_tested},          {"skipped", r.disks_skipped},
               {"directed", r.directed_used},      {"min_bk_at_p", r.min_bk},
               {"worst_index", r.worst_index},     {"boundary_refined", r.worst.boundary_refined}};
  if (!o.pass)
    o.witness = {{"seed", seed}, {"disk", to_json(r.worst_disk.coefficients())}, {"disk_index", r.worst_index},
                 {"defect", r.worst.defect}};
  record_defects(job.series, job, r.defects);
  return o;
}

ScanOptions scan_options(const Job& job, const json& P) {
  ScanOptions so;
  so.seed = job.seed();
  so.disks = integer(P, "disks", job.sc.sampler.disks);
  so.size_min = num(P, "size_min", 1e-3);
  so.size_max = num(P, "size_max", 0.3);
  so.region_radius = job.sc.sampler.region_radius;
  if (P.contains("directed")) so.directed = P["directed"].get<bool>();
  return so;
}

Outcome comparison_scan(const SpaceBundle& b, const Job& job) {
  const json& P = job.check->params;
  const CVec p = point(P, "p", b.space.n);
  const double K = num(P, "K", 0);
  ScanOptions so = scan_options(job, P);
  if (P.contains("center")) so.center = point(P, "center", b.space.n);
  const ScanResult r = scan_disks(b.space, p, K, so);
  return from_scan(r, job, job.tol(b.space.distance.default_tolerance()), so.seed);
}

Outcome violation_study(const SpaceBundle& b, const Job& job) {
  const json& P = job.check->params;
  const double K = num(P, "K", 0);
  const int n = b.space.n;
  std::vector<double> eps2;
  for (const auto& e : P.at("eps2")) eps2.push_back(e.get<double>());
  if (eps2.empty()) fail(ErrorKind::ConfigError, "eps2: expected a nonempty list");
  Outcome o;
  o.seed = job.seed();
  o.value = kInf;
  CVec p = P.contains("p") ? point(P, "p", n) : CVec(CVec::Zero(n));
  double Rprime = 0;
  core::TangentPair pair;
  if (b.kahler) {
    core::MinBkOptions mo;
    mo.seed = job.seed();
    const core::CurvatureData R = core::curvature_tensor(b.space.metric, p);
    const core::MinBkResult mb = core::min_bk_defect(R, K, mo);
    pair = mb.pair;
    Rprime = -mb.value;
    o.details["min_bk"] = mb.value;
  } else {
    if (!P.contains("a") || !P.contains("b"))
      fail(ErrorKind::ConfigError, "violation-study on a torsion space needs 'a' and 'b'");
  }
  json rows = json::array();
  disk::DiskEmbedding worst;
  for (double e2 : eps2) {
    const double e1 = num(P, "eps1", e2 / 10);
    disk::DiskEmbedding d;
    double stated = 0, leading = 0;
    if (b.kahler) {
      d = disk::violation_disk(p, pair, e1, e2);
      stated = disk::asymptotic_defect(Rprime, e1, e2);
      leading = disk::leading_order_defect(Rprime, e1, e2);
    } else {
      const CVec a = point(P, "a", n), bb = point(P, "b", n);
      d = disk::torsion_disk(a, bb, e1, e2);
      stated = disk::torsion_display(*b.torsion, a, bb, e1, e2);
      leading = disk::torsion_leading_defect(*b.torsion, a, bb, e1, e2);
    }
    const disk::ComparisonReport rep = disk::comparison_defect(b.space.metric, d, p, K, b.space.distance);
    rows.push_back({{"scenario_id", job.sc.id}, {"check_id", job.check->id}, {"eps1", e1},
                    {"eps2", e2}, {"defect", rep.defect}, {"error", rep.error_estimate},
                    {"stated", std::isfinite(stated) ? json(stated) : json(nullptr)},
                    {"leading", std::isfinite(leading) ? json(leading) : json(nullptr)}});
    job.series.ratio_curves.push_back(rows.back());
    if (rep.defect < o.value) {
      o.value = rep.defect;
      o.error_est = rep.error_estimate;
      worst = d;
    }
  }
  // Violation defects scale like ε₁²ε₂², far below the scan tolerances: a study
  // fails once the worst defect is negative beyond three error estimates.
  o.pass = o.value + 3 * o.error_est >= -job.tol(0.0);
  o.details["studies"] = rows;
  if (!o.pass) o.witness = {{"seed", o.seed}, {"disk", to_json(worst.coefficients())}, {"p", to_json(p)}};
  return o;
}

Outcome annulus(const SpaceBundle& b, const Job& job) {
  const json& P = job.check->params;
  const CVec p = point(P, "p", b.space.n);
  const double K = num(P, "K", 0);
  const double eps = num(P, "eps", 0.05);
  const double e2 = num(P, "eps2", 5e-2), e1 = num(P, "eps1", e2 / 10);
  core::MinBkOptions mo;
  mo.seed = job.seed();
  const core::MinBkResult mb = core::min_bk_defect(core::curvature_tensor(b.space.metric, p), K, mo);
  const disk::DiskEmbedding d = disk::violation_disk(p, mb.pair, e1, e2);
  const disk::AnnulusReport a = disk::annulus_defect(b.space.metric, d, p, K, eps, b.space.distance);
  const disk::ComparisonReport c = disk::comparison_defect(b.space.metric, d, p, K, b.space.distance);
  Outcome o;
  o.seed = job.seed();
  o.value = a.value;
  o.error_est = a.error_estimate;
  o.pass = a.value >= -job.tol(b.space.distance.default_tolerance());
  o.details = {{"tail", a.tail}, {"comparison_defect", c.defect},
               {"half_pi_defect", 0.5 * std::numbers::pi * c.defect}};
  if (!o.pass) o.witness = {{"seed", o.seed}, {"disk", to_json(d.coefficients())}, {"eps", eps}};
  return o;
}

Outcome psh_check(const SpaceBundle& b, const Job& job) {
  const json& P = job.check->params;
  psh::SamplerConfig cfg = job.sampler();
  if (P.contains("center")) cfg.center = point(P, "center", b.space.n);
  return from_verdict(psh::check_bk_lower(b.space, point(P, "p", b.space.n), num(P, "K", 0), cfg));
}

Outcome psh_set(const SpaceBundle& b, const Job& job) {
  const json& P = job.check->params;
  psh::SamplerConfig cfg = job.sampler();
  if (P.contains("center")) cfg.center = point(P, "center", b.space.n);
  psh::PointSet S;
  if (P.contains("points")) {
    for (size_t i = 0; i < P["points"].size(); ++i) {
      const CVec z = parse_point(P["points"][i], "points[" + std::to_string(i) + "]");
      if (z.size() != b.space.n) fail(ErrorKind::ConfigError, "points: dimension");
      S.points.push_back(z);
    }
  }
  if (P.contains("line")) {
    const json& L = P["line"];
    if (!L.is_object() || !L.contains("base") || !L.contains("dir") || L.size() != 2)
      fail(ErrorKind::ConfigError, "line: expected {\"base\": point, \"dir\": vector}");
    S.line = std::make_pair(point(L, "base", b.space.n), point(L, "dir", b.space.n));
  }
  return from_verdict(psh::check_bk_lower_set(b.space, S, num(P, "K", 0), cfg));
}

Outcome radial(const SpaceBundle& b, const Job& job) {
  const json& P = job.check->params;
  const psh::RadialReport r = psh::radial_potential_check(*b.cone, integer(P, "samples", 200), job.tol(1e-4));
  Outcome o;
  o.pass = r.pass;
  o.value = r.max_abs_residual;
  o.details = {{"samples", r.samples}, {"potential_mismatch", r.max_potential_mismatch},
               {"alpha", b.cone->alpha}};
  return o;
}

Outcome quotient(const SpaceBundle& b, const Job& job) {
  const psh::QuotientReport r =
      psh::quotient_bk2_check(*b.quotient, point(job.check->params, "zprime", b.quotient->n), job.sampler());
  Outcome o = from_verdict(r.verdict);
  o.details["min_levi_eigenvalue"] = r.min_levi_eigenvalue;
  o.details["saturated"] = std::abs(r.verdict.min_value) <= 1e-3;
  return o;
}

Outcome domain_compare(const SpaceBundle& b, const Job& job) {
  const json& P = job.check->params;
  const int n = b.space.n;
  const CVec p = point(P, "p", n), q = point(P, "q", n);
  const double d_dom = b.space.distance(p, q).d;
  const double d_amb = (p - q).norm();
  const double ratio = d_dom / d_amb;
  ScanOptions so = scan_options(job, P);
  so.center = P.contains("center") ? point(P, "center", n) : q;
  so.directed = false;
  const auto domain = b.domain;
  so.admissible = [domain](const CVec& z) {
    if (!domain->contains(z)) return false;
    const RVec x = to_real(z);
    for (const auto& ob : domain->obstacles)
      if (ob.contains(x, 1e-3)) return false;
    return true;
  };
  const ScanResult r = scan_disks(b.space, p, 0.0, so);
  Outcome o = from_scan(r, job, job.tol(1e-6), so.seed);
  o.details["length_ratio"] = ratio;
  o.details["domain_distance"] = d_dom;
  o.details["ambient_distance"] = d_amb;
  const double min_ratio = num(P, "min_ratio", 0.0);
  if (ratio < 1 + min_ratio)
    spdlog::warn("{}/{}: length ratio {:.4f} below the declared 1 + {}", job.sc.id, job.check->id, ratio,
                 min_ratio);
  return o;
}

Outcome threshold(const SpaceBundle& b, const Job& job) {
  const json& P = job.check->params;
  const CVec p = point(P, "p", b.space.n);
  const double lo = num(P, "lo", 0), hi = num(P, "hi", 0);
  const double resolution = num(P, "resolution", 1e-3);
  const psh::ThresholdResult t = psh::k_threshold(b.space, p, lo, hi, job.sampler(), resolution);
  Outcome o;
  o.seed = job.seed();
  o.value = t.K;
  o.error_est = t.hi - t.lo;
  // A proper bracket: PASS at the low end and FAIL at the high end.
  const bool bracketed = !t.trace.empty() && t.trace.front().pass && t.trace.size() > 1 && !t.trace[1].pass;
  o.pass = bracketed;
  json tr = json::array();
  for (size_t i = 0; i < t.trace.size(); ++i) {
    const auto& s = t.trace[i];
    tr.push_back({{"step", i}, {"K", s.K}, {"pass", s.pass}, {"min_value", s.min_value}});
    job.series.threshold_traces.push_back({{"scenario_id", job.sc.id}, {"check_id", job.check->id},
                                           {"step", i}, {"K", s.K}, {"pass", s.pass},
                                           {"min_value", s.min_value}});
  }
  o.details = {{"lo", t.lo}, {"hi", t.hi}, {"trace", tr}};
  return o;
}

Outcome evaluate(const SpaceBundle& b, const Job& job) {
  const std::string& k = job.check->kind;
  if (k == "curvature-match") return curvature_match(b, job);
  if (k == "min-bk-defect") return min_bk(b, job);
  if (k == "comparison-scan") return comparison_scan(b, job);
  if (k == "violation-study") return violation_study(b, job);
  if (k == "annulus") return annulus(b, job);
  if (k == "psh") return psh_check(b, job);
  if (k == "psh-set") return psh_set(b, job);
  if (k == "radial-potential") return radial(b, job);
  if (k == "quotient-bk2") return quotient(b, job);
  if (k == "domain-compare") return domain_compare(b, job);
  if (k == "k-threshold") return threshold(b, job);
  fail(ErrorKind::ConfigError, "unknown check " + k);
}

bool selected(Mode mode, const std::string& kind) {
  switch (mode) {
    case Mode::Run:
      return true;
    case Mode::Scan:
      return kind == "comparison-scan" || kind == "domain-compare";
    case Mode::Threshold:
      return kind == "k-threshold";
  }
  return false;
}

struct ScenarioResult {
  std::vector<ResultRow> rows;
  json checks = json::array();
  json witnesses = json::object();
  Series series;
  bool error = false;
};

ScenarioResult run_scenario(const Scenario& sc, const RunOptions& opts) {
  ScenarioResult out;
  SpaceBundle b;
  bool built = false;
  std::string build_error;
  try {
    b = build_space(sc.space_spec);
    built = true;
  } catch (const LabError& e) {
    build_error = e.what();
  }
  for (const auto& chk : sc.checks) {
    if (!selected(opts.mode, chk.kind)) continue;
    Job job{sc, opts, out.series, &chk};
    ResultRow row;
    row.scenario_id = sc.id;
    row.check_id = chk.id;
    row.seed = job.seed();
    json rec = {{"id", chk.id}, {"check", chk.kind}, {"expect", to_string(chk.expect)}};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if (!built) fail(ErrorKind::InvalidArgument, build_error);
      spdlog::info("{}/{}: running", sc.id, chk.id);
      const Outcome o = evaluate(b, job);
      row.verdict = o.pass ? "PASS" : "FAIL";
      row.value = o.value;
      row.error_est = o.error_est;
      if (o.seed) row.seed = o.seed;
      row.matched = (o.pass ? Expect::Pass : Expect::Fail) == chk.expect;
      if (!o.witness.is_null()) {
        row.witness_ref = sc.id + "/" + chk.id;
        out.witnesses[row.witness_ref] = o.witness;
      }
      rec["details"] = o.details;
    } catch (const LabError& e) {
      row.verdict = "ERROR";
      row.matched = false;
      row.value = std::numeric_limits<double>::quiet_NaN();
      out.error = true;
      rec["error"] = e.what();
      spdlog::error("{}/{}: {}", sc.id, chk.id, e.what());
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (row.verdict != "ERROR")
      spdlog::log(row.matched ? spdlog::level::info : spdlog::level::warn, "{}/{}: {} (expected {}), value {}",
                  sc.id, chk.id, row.verdict, to_string(chk.expect), format_number(row.value));
    rec["verdict"] = row.verdict;
    rec["matched"] = row.matched;
    rec["value"] = std::isfinite(row.value) ? json(row.value) : json(nullptr);
    rec["error_est"] = row.error_est;
    rec["seed"] = row.seed;
    rec["witness_ref"] = row.witness_ref;
    out.checks.push_back(rec);
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_line(const ResultRow& r, bool with_wall) {
  std::string s = csv_field(r.scenario_id) + "," + csv_field(r.check_id) + "," + r.verdict + "," +
                  format_number(r.value) + "," + format_number(r.error_est) + "," + std::to_string(r.seed) +
                  "," + csv_field(r.witness_ref) + ",";
  if (with_wall) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", r.wall_ms);
    s += buf;
  }
  return s;
}

RunReport run_config(const Config& cfg, const RunOptions& opts) {
  const size_t n = cfg.scenarios.size();
  std::vector<ScenarioResult> results(n);
  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(n)));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i; (i = next++) < n;) results[i] = run_scenario(cfg.scenarios[i], opts);
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  RunReport rep;
  json scen = json::array();
  json witnesses = json::object();
  Series all;
  bool error = false, unexpected = false;
  int pass = 0, fail_count = 0, errors = 0;
  for (size_t i = 0; i < n; ++i) {
    auto& r = results[i];
    for (const auto& row : r.rows) {
      rep.rows.push_back(row);
      if (row.verdict == "ERROR")
        ++errors;
      else
        (row.verdict == "PASS" ? pass : fail_count)++;
      if (!row.matched) unexpected = true;
    }
    error = error || r.error;
    scen.push_back({{"id", cfg.scenarios[i].id}, {"checks", r.checks}});
    for (auto& [k, v] : r.witnesses.items()) witnesses[k] = v;
    for (auto& x : r.series.ratio_curves) all.ratio_curves.push_back(x);
    for (auto& x : r.series.threshold_traces) all.threshold_traces.push_back(x);
    for (auto& x : r.series.defect_samples) all.defect_samples.push_back(x);
  }
  rep.exit_code = error ? 2 : unexpected ? 1 : 0;
  const char* mode = opts.mode == Mode::Run ? "run" : opts.mode == Mode::Scan ? "scan" : "threshold";
  rep.summary = {{"version", kConfigVersion},
                 {"config", cfg.source},
                 {"mode", mode},
                 {"seed_override", opts.seed ? json(*opts.seed) : json(nullptr)},
                 {"tol_override", opts.tol ? json(*opts.tol) : json(nullptr)},
                 {"counts", {{"checks", rep.rows.size()}, {"pass", pass}, {"fail", fail_count}, {"error", errors}}},
                 {"exit_code", rep.exit_code},
                 {"scenarios", scen},
                 {"witnesses", witnesses}};
  rep.series = {{"ratio_curves", all.ratio_curves},
                {"threshold_traces", all.threshold_traces},
                {"defect_samples", all.defect_samples}};
  return rep;
}

void write_report(const RunReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto open = [&](const std::string& name) {
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    if (!f) fail(ErrorKind::InvalidArgument, "cannot write " + (fs::path(dir) / name).string());
    return f;
  };
  {
    auto f = open("results.csv");
    f << kCsvHeader << "\r\n";
    for (const auto& r : report.rows) f << csv_line(r) << "\r\n";
  }
  open("summary.json") << report.summary.dump(2) << "\n";
  open("series.json") << report.series.dump(2) << "\n";
}

}  // namespace kahlerlab::lab
