#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace kahlerlab::lab {

// ratio_curves.csv, threshold_traces.csv and defect_histogram.csv from a
// series blob; missing series give header-only files.
void emit_plot_data(const nlohmann::json& series, const std::string& out_dir, int bins = 40);

// Reads series.json from dir (absent → empty report set) and writes into out_dir.
void plotdata_from_dir(const std::string& dir, const std::string& out_dir);

}  // namespace kahlerlab::lab
