// lab: scenario runner for the comparison-geometry checks.
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "kahlerlab/lab/config.hpp"
#include "kahlerlab/lab/plotdata.hpp"
#include "kahlerlab/lab/runner.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("lab");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("LAB_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept "off" when spelled out.
    if (level != spdlog::level::off || std::string(env) == "off")
      spdlog::set_level(level);
    else
      spdlog::warn("LAB_LOG={} not recognized; using warn", env);
  }
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Run comparison-geometry scenarios and emit reports"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  int jobs = 1;
  std::string out = "lab-out";
  app.add_option("--seed", seed, "override every sampler seed");
  app.add_option("--jobs", jobs, "scenario-level worker threads")->check(CLI::Range(1, 256));
  app.add_option("--tol", tol, "override every PASS tolerance")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out, "output directory");

  std::string config, dir;
  auto* run = app.add_subcommand("run", "run every check of a config");
  run->add_option("config", config, "scenario config (JSON)")->required();
  auto* scan = app.add_subcommand("scan", "run the disk scans of a config");
  scan->add_option("config", config, "scenario config (JSON)")->required();
  auto* thr = app.add_subcommand("threshold", "run the K-threshold bisections of a config");
  thr->add_option("config", config, "scenario config (JSON)")->required();
  auto* plot = app.add_subcommand("plotdata", "write plot tables from a report directory");
  plot->add_option("dir", dir, "directory holding series.json")->required();

  // Flags are accepted before or after the subcommand.
  for (auto* sub : {run, scan, thr, plot}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 3;
  }

  try {
    if (plot->parsed()) {
      kahlerlab::lab::plotdata_from_dir(dir, app.count("--out") ? out : dir);
      return 0;
    }
    kahlerlab::lab::RunOptions opts;
    opts.seed = seed;
    opts.tol = tol;
    opts.jobs = jobs;
    opts.mode = scan->parsed()  ? kahlerlab::lab::Mode::Scan
                : thr->parsed() ? kahlerlab::lab::Mode::Threshold
                                : kahlerlab::lab::Mode::Run;
    const kahlerlab::lab::Config cfg = kahlerlab::lab::load_config(config);
    const kahlerlab::lab::RunReport rep = kahlerlab::lab::run_config(cfg, opts);
    kahlerlab::lab::write_report(rep, out);
    if (rep.rows.empty()) spdlog::warn("no checks selected for this subcommand");
    for (const auto& r : rep.rows)
      std::cout << r.scenario_id << '/' << r.check_id << ": " << r.verdict << (r.matched ? "" : " (unexpected)")
                << '\n';
    return rep.exit_code;
  } catch (const kahlerlab::LabError& e) {
    std::cerr << e.what() << '\n';
    return e.kind() == kahlerlab::ErrorKind::ConfigError ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
