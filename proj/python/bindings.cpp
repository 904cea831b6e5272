#include <optional>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <spdlog/spdlog.h>

#include "kahlerlab/holo_disk.hpp"
#include "kahlerlab/kahler.hpp"
#include "kahlerlab/lab/config.hpp"
#include "kahlerlab/lab/runner.hpp"
#include "kahlerlab/model_spaces.hpp"
#include "kahlerlab/psh.hpp"
#include "kahlerlab/spaces.hpp"

namespace py = pybind11;
using namespace kahlerlab;

namespace {

disk::DiskEmbedding make_disk(const std::vector<CVec>& coeffs) { return disk::DiskEmbedding(coeffs); }

py::dict verdict_dict(const psh::PshVerdict& v) {
  py::dict d;
  d["pass"] = v.pass;
  d["min_value"] = v.min_value;
  d["min_distributional"] = v.min_distributional;
  d["seed"] = v.seed;
  d["disks_tested"] = v.disks_tested;
  d["points_tested"] = v.points_tested;
  d["witness_disk"] = v.witness.disk_index;
  return d;
}

}  // namespace

PYBIND11_MODULE(kahlerlab, m) {
  m.doc() = "Numerical comparison geometry for Kahler metrics";

  static py::exception<LabError> lab_error(m, "LabError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const LabError& e) {
      py::set_error(lab_error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<KahlerSpace>(m, "Space")
      .def_readonly("name", &KahlerSpace::name)
      .def_readonly("n", &KahlerSpace::n)
      .def("distance", [](const KahlerSpace& s, const CVec& p, const CVec& q) { return s.distance(p, q).d; })
      .def("metric", [](const KahlerSpace& s, const CVec& z) { return s.metric(z); });

  m.def("model_space", &model_space, py::arg("K"), py::arg("n"));
  m.def("cone_space", &cone_space, py::arg("alpha"));
  m.def("orbifold_space", &orbifold_space, py::arg("k"));

  m.def("dK_transform", [](double d, double K) { return model::dK_transform(d, K); }, py::arg("d"), py::arg("K"));
  m.def("model_distance", &model::model_distance, py::arg("K"), py::arg("z1"), py::arg("z2"));

  m.def(
      "min_bk_defect",
      [](const KahlerSpace& s, const CVec& z, double K, std::uint64_t seed) {
        core::MinBkOptions o;
        o.seed = seed;
        return core::min_bk_defect(core::curvature_tensor(s.metric, z), K, o).value;
      },
      py::arg("space"), py::arg("z"), py::arg("K"), py::arg("seed") = 1);

  m.def(
      "comparison_defect",
      [](const KahlerSpace& s, const std::vector<CVec>& coeffs, const CVec& p, double K) {
        const auto r = disk::comparison_defect(s.metric, make_disk(coeffs), p, K, s.distance);
        return py::make_tuple(r.defect, r.error_estimate);
      },
      py::arg("space"), py::arg("disk"), py::arg("p"), py::arg("K"),
      "Comparison defect of the disk w -> sum_k disk[k] w^k; returns (defect, error_estimate).");

  m.def(
      "check_bk_lower",
      [](const KahlerSpace& s, const CVec& p, double K, std::uint64_t seed, int disks, int crossing_disks) {
        psh::SamplerConfig cfg;
        cfg.seed = seed;
        cfg.disks = disks;
        cfg.crossing_disks = crossing_disks;
        return verdict_dict(psh::check_bk_lower(s, p, K, cfg));
      },
      py::arg("space"), py::arg("p"), py::arg("K"), py::arg("seed") = 1, py::arg("disks") = 50,
      py::arg("crossing_disks") = 0);

  m.def(
      "run_config",
      [](const std::string& text, std::optional<std::uint64_t> seed, int jobs) {
        lab::RunOptions o;
        o.seed = seed;
        o.jobs = jobs;
        const auto report = lab::run_config(lab::parse_config(text), o);
        py::list rows;
        for (const auto& r : report.rows) {
          py::dict d;
          d["scenario_id"] = r.scenario_id;
          d["check_id"] = r.check_id;
          d["verdict"] = r.verdict;
          d["value"] = r.value;
          d["error_est"] = r.error_est;
          d["seed"] = r.seed;
          d["matched"] = r.matched;
          rows.append(d);
        }
        return py::make_tuple(report.exit_code, rows);
      },
      py::arg("config"), py::arg("seed") = std::nullopt, py::arg("jobs") = 1,
      "Runs a JSON config given as text; returns (exit_code, rows).");

  m.def("set_log_level", [](const std::string& level) { spdlog::set_level(spdlog::level::from_str(level)); });
  spdlog::set_level(spdlog::level::warn);
}
