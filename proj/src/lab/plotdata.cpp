#include "kahlerlab/lab/plotdata.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kahlerlab/lab/runner.hpp"
#include "kahlerlab/types.hpp"

namespace kahlerlab::lab {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) fail(ErrorKind::InvalidArgument, "cannot write " + p.string());
  return f;
}

std::string number_or_empty(const json& v) {
  return v.is_number() ? format_number(v.get<double>()) : std::string();
}

const json& list(const json& series, const char* key) {
  static const json empty = json::array();
  return series.is_object() && series.contains(key) && series[key].is_array() ? series[key] : empty;
}

}  // namespace

void emit_plot_data(const json& series, const std::string& out_dir, int bins) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  {
    auto f = open_out(dir / "ratio_curves.csv");
    f << "scenario_id,check_id,eps1,eps2,defect,error,ratio_stated,ratio_leading\r\n";
    for (const auto& r : list(series, "ratio_curves")) {
      const double d = r.at("defect").get<double>();
      auto ratio = [&](const char* key) {
        return r.contains(key) && r[key].is_number() ? format_number(d / r[key].get<double>()) : std::string();
      };
      f << csv_field(r.at("scenario_id").get<std::string>()) << ',' << csv_field(r.at("check_id").get<std::string>())
        << ',' << number_or_empty(r.at("eps1")) << ',' << number_or_empty(r.at("eps2")) << ','
        << format_number(d) << ',' << number_or_empty(r.at("error")) << ',' << ratio("stated") << ','
        << ratio("leading") << "\r\n";
    }
  }
  {
    auto f = open_out(dir / "threshold_traces.csv");
    f << "scenario_id,check_id,step,K,verdict,min_value\r\n";
    for (const auto& r : list(series, "threshold_traces"))
      f << csv_field(r.at("scenario_id").get<std::string>()) << ',' << csv_field(r.at("check_id").get<std::string>())
        << ',' << r.at("step").get<int>() << ',' << format_number(r.at("K").get<double>()) << ','
        << (r.at("pass").get<bool>() ? "PASS" : "FAIL") << ',' << format_number(r.at("min_value").get<double>())
        << "\r\n";
  }
  {
    auto f = open_out(dir / "defect_histogram.csv");
    f << "scenario_id,check_id,bin_lo,bin_hi,count\r\n";
    for (const auto& r : list(series, "defect_samples")) {
      std::vector<double> d;
      for (const auto& v : r.at("defects")) d.push_back(v.get<double>());
      if (d.empty()) continue;
      const auto [mn, mx] = std::minmax_element(d.begin(), d.end());
      const double lo = *mn, hi = *mx > *mn ? *mx : *mn + 1e-300;
      const int nb = std::max(1, bins);
      std::vector<int> count(nb, 0);
      for (double v : d) ++count[std::min(nb - 1, static_cast<int>((v - lo) / (hi - lo) * nb))];
      for (int b = 0; b < nb; ++b)
        f << csv_field(r.at("scenario_id").get<std::string>()) << ','
          << csv_field(r.at("check_id").get<std::string>()) << ',' << format_number(lo + (hi - lo) * b / nb) << ','
          << format_number(lo + (hi - lo) * (b + 1) / nb) << ',' << count[b] << "\r\n";
    }
  }
}

void plotdata_from_dir(const std::string& dir, const std::string& out_dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) fail(ErrorKind::InvalidArgument, dir + ": not a directory");
  json series = json::object();
  const fs::path p = fs::path(dir) / "series.json";
  if (fs::exists(p)) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      series = json::parse(ss.str());
    } catch (const json::exception& e) {
      fail(ErrorKind::InvalidArgument, p.string() + ": " + e.what());
    }
  }
  emit_plot_data(series, out_dir);
}

}  // namespace kahlerlab::lab
