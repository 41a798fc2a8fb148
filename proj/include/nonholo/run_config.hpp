#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nonholo/chart.hpp"

namespace nonholo {

/// Fully resolved description of one CLI run. Every output embeds it, and
/// the embedded block parses back to an equal RunConfig.
struct RunConfig {
  std::string command;  // tensors | geodesic | autoparallel | variation | burgers | amplitude | spectrum

  std::string chart_path;
  std::optional<ChartSpec> chart;  // inline alternative to chart_path
  std::map<std::string, double> chart_params;  // overrides applied to the chart's params

  std::vector<double> point;
  std::vector<double> velocity;
  double t0 = 0.0;
  double t1 = 1.0;
  double step = 1e-3;
  std::vector<std::string> deltaq;

  std::string loop_path;
  std::vector<std::vector<double>> loop;  // inline alternative to loop_path
  int samples_per_edge = 8;

  std::string manifold = "ring";  // ring | sphere
  double radius = 1.0;
  int points = 256;
  int n_theta = 64;
  int n_phi = 128;
  std::string measure = "qep";  // naive | qep | qep_veff
  double mass = 1.0;
  double hbar = 1.0;
  double epsilon = 0.01;
  std::vector<double> eps_ladder{0.08, 0.04, 0.02, 0.01};
  int richardson_order = 1;
  int n_levels = 7;
  double degeneracy_tol = 0.02;

  std::string tolerance_profile;  // empty: NONHOLO_TOLERANCE_PROFILE or "default"
  std::string output_path;
  std::string output_format = "json";  // json | csv

  bool operator==(const RunConfig&) const = default;
};

nlohmann::json run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig parse_run_config_file(const std::filesystem::path& path);

// Throws Validation on unknown commands, non-positive numeric settings, and
// missing inputs required by the command.
void validate(const RunConfig& cfg);

}  // namespace nonholo
