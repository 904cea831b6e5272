#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kahlerlab/lab/config.hpp"

namespace kahlerlab::lab {

enum class Mode { Run, Scan, Threshold };

struct RunOptions {
  Mode mode = Mode::Run;
  std::optional<std::uint64_t> seed;  // overrides every sampler seed
  std::optional<double> tol;          // overrides every PASS tolerance
  int jobs = 1;                       // scenario-level workers
};

// One CSV line. verdict is PASS (no violation found), FAIL or ERROR.
struct ResultRow {
  std::string scenario_id;
  std::string check_id;
  std::string verdict;
  double value = 0;
  double error_est = 0;
  std::uint64_t seed = 0;
  std::string witness_ref;
  double wall_ms = 0;
  bool matched = false;  // verdict equals the declared expectation
};

struct RunReport {
  std::vector<ResultRow> rows;
  nlohmann::json summary;
  nlohmann::json series;  // ratio_curves, threshold_traces, defect_samples
  int exit_code = 0;      // 0 all matched, 1 unexpected verdict, 2 numerical error
};

inline constexpr const char* kCsvHeader =
    "scenario_id,check_id,verdict,value,error_est,seed,witness_ref,wall_ms";

RunReport run_config(const Config& cfg, const RunOptions& opts = {});

// results.csv, summary.json and series.json in dir (created if needed).
void write_report(const RunReport& report, const std::string& dir);

std::string csv_field(const std::string& s);
std::string format_number(double v);
std::string csv_line(const ResultRow& row, bool with_wall = true);

}  // namespace kahlerlab::lab
