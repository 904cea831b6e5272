#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kahlerlab/geodesy.hpp"
#include "kahlerlab/holo_disk.hpp"
#include "kahlerlab/model_spaces.hpp"
#include "kahlerlab/spaces.hpp"

namespace kahlerlab::lab {

inline constexpr int kConfigVersion = 1;

enum class Expect { Pass, Fail };

struct SamplerSpec {
  std::uint64_t seed = 1;
  int disks = 50;
  int crossing_disks = 0;
  int points_per_disk = 13;
  double size_min = 0.02;
  double size_max = 0.3;
  double region_radius = 0.5;
  bool degree2 = true;
};

// A check as declared; `params` keeps the check-specific keys, already
// validated against the per-check schema.
struct CheckSpec {
  std::string id;
  std::string kind;
  Expect expect = Expect::Pass;
  nlohmann::json params;
  std::optional<double> tol;  // overrides the per-check default
};

// The resolved space plus whatever the individual checks need beyond KahlerSpace.
struct SpaceBundle {
  std::string kind;
  KahlerSpace space;
  bool kahler = true;
  std::optional<model::ModelSpace> model;
  std::optional<model::ConeSurface> cone;
  std::optional<model::QuotientData> quotient;
  std::optional<disk::TorsionTensor> torsion;
  std::shared_ptr<const geodesy::Domain> domain;
};

struct Scenario {
  std::string id;
  nlohmann::json space_spec;
  SamplerSpec sampler;
  std::optional<double> tol;
  std::optional<double> dist_tol;
  std::vector<CheckSpec> checks;
};

struct Config {
  int version = kConfigVersion;
  std::string source;  // path or "<string>"
  std::vector<Scenario> scenarios;
};

// Strict parse: unknown keys, missing keys and type mismatches raise
// LabError(ConfigError) naming the field path and its line.
Config parse_config(const std::string& text, const std::string& source = "<string>");
Config load_config(const std::string& path);

// Builds the space; throws ConfigError for invalid parameters.
SpaceBundle build_space(const nlohmann::json& spec);

// Complex vector from [[re, im], ...] or [re, ...].
CVec parse_point(const nlohmann::json& j, const std::string& where);

std::string to_string(Expect e);

}  // namespace kahlerlab::lab
