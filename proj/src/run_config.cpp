#include "nonholo/run_config.hpp"

#include <algorithm>
#include <array>
#include <string_view>

#include "nonholo/chart_io.hpp"
#include "nonholo/errors.hpp"

namespace nonholo {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 7> kCommands = {"tensors",  "geodesic",  "autoparallel", "variation",
                                                       "burgers",  "amplitude", "spectrum"};

template <class T>
void read(const json& j, const char* key, T& slot) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  try {
    slot = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Validation, std::string("config field '") + key + "': " + e.what());
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::Validation, what);
}

}  // namespace

json run_config_to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["chart_path"] = c.chart_path;
  j["chart"] = c.chart ? chart_spec_to_json(*c.chart) : json(nullptr);
  j["chart_params"] = c.chart_params;
  j["point"] = c.point;
  j["velocity"] = c.velocity;
  j["t0"] = c.t0;
  j["t1"] = c.t1;
  j["step"] = c.step;
  j["deltaq"] = c.deltaq;
  j["loop_path"] = c.loop_path;
  j["loop"] = c.loop;
  j["samples_per_edge"] = c.samples_per_edge;
  j["manifold"] = c.manifold;
  j["radius"] = c.radius;
  j["points"] = c.points;
  j["n_theta"] = c.n_theta;
  j["n_phi"] = c.n_phi;
  j["measure"] = c.measure;
  j["mass"] = c.mass;
  j["hbar"] = c.hbar;
  j["epsilon"] = c.epsilon;
  j["eps_ladder"] = c.eps_ladder;
  j["richardson_order"] = c.richardson_order;
  j["n_levels"] = c.n_levels;
  j["degeneracy_tol"] = c.degeneracy_tol;
  j["tolerance_profile"] = c.tolerance_profile;
  j["output_path"] = c.output_path;
  j["output_format"] = c.output_format;
  return j;
}

RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Validation, "run config must be a JSON object");
  static const std::array<std::string_view, 29> known = {
      "command",  "chart_path", "chart",      "chart_params",     "point",      "velocity",         "t0",
      "t1",       "step",       "deltaq",    "loop_path",  "loop",             "samples_per_edge",
      "manifold", "radius",     "points",    "n_theta",    "n_phi",            "measure",
      "mass",     "hbar",       "epsilon",   "eps_ladder", "richardson_order", "n_levels",
      "degeneracy_tol", "tolerance_profile", "output_path", "output_format"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw Error(ErrorKind::Validation, "unknown config field '" + key + "'");

  RunConfig c;
  read(j, "command", c.command);
  read(j, "chart_path", c.chart_path);
  if (j.contains("chart") && !j.at("chart").is_null()) c.chart = chart_spec_from_json(j.at("chart"));
  read(j, "chart_params", c.chart_params);
  read(j, "point", c.point);
  read(j, "velocity", c.velocity);
  read(j, "t0", c.t0);
  read(j, "t1", c.t1);
  read(j, "step", c.step);
  read(j, "deltaq", c.deltaq);
  read(j, "loop_path", c.loop_path);
  read(j, "loop", c.loop);
  read(j, "samples_per_edge", c.samples_per_edge);
  read(j, "manifold", c.manifold);
  read(j, "radius", c.radius);
  read(j, "points", c.points);
  read(j, "n_theta", c.n_theta);
  read(j, "n_phi", c.n_phi);
  read(j, "measure", c.measure);
  read(j, "mass", c.mass);
  read(j, "hbar", c.hbar);
  read(j, "epsilon", c.epsilon);
  read(j, "eps_ladder", c.eps_ladder);
  read(j, "richardson_order", c.richardson_order);
  read(j, "n_levels", c.n_levels);
  read(j, "degeneracy_tol", c.degeneracy_tol);
  read(j, "tolerance_profile", c.tolerance_profile);
  read(j, "output_path", c.output_path);
  read(j, "output_format", c.output_format);
  return c;
}

RunConfig parse_run_config_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, "malformed config JSON in '" + path.string() + "': " + e.what());
  }
  return run_config_from_json(j);
}

void validate(const RunConfig& c) {
  require(std::find(kCommands.begin(), kCommands.end(), c.command) != kCommands.end(),
          "unknown command '" + c.command + "'");
  require(c.output_format == "json" || c.output_format == "csv", "output_format must be json or csv");
  require(c.step > 0 && c.t1 > c.t0, "step must be positive and t1 > t0");
  require(c.samples_per_edge >= 8, "samples_per_edge must be >= 8");
  require(c.radius > 0 && c.points > 0 && c.n_theta > 0 && c.n_phi > 0, "grid settings must be positive");
  require(c.mass > 0 && c.hbar > 0 && c.epsilon > 0, "mass, hbar and epsilon must be positive");
  require(c.n_levels > 0 && c.richardson_order >= 0 && c.degeneracy_tol > 0, "spectrum settings must be positive");
  require(!c.eps_ladder.empty(), "eps_ladder must not be empty");
  for (double e : c.eps_ladder) require(e > 0, "eps_ladder entries must be positive");
  require(static_cast<int>(c.eps_ladder.size()) >= c.richardson_order + 1,
          "eps_ladder needs richardson_order + 1 entries");
  require(c.tolerance_profile.empty() || c.tolerance_profile == "default" || c.tolerance_profile == "strict" ||
              c.tolerance_profile == "loose",
          "tolerance_profile must be default, strict or loose");
  require(c.manifold == "ring" || c.manifold == "sphere", "manifold must be ring or sphere");
  require(c.measure == "naive" || c.measure == "qep" || c.measure == "qep_veff",
          "measure must be naive, qep or qep_veff");

  const bool needs_chart = c.command == "tensors" || c.command == "geodesic" || c.command == "autoparallel" ||
                           c.command == "variation" || c.command == "burgers";
  if (needs_chart) require(!c.chart_path.empty() || c.chart, "command '" + c.command + "' needs a chart");
  if (c.command == "tensors" || c.command == "geodesic" || c.command == "autoparallel" || c.command == "variation")
    require(!c.point.empty(), "command '" + c.command + "' needs a point");
  if (c.command == "geodesic" || c.command == "autoparallel" || c.command == "variation")
    require(c.velocity.size() == c.point.size(), "velocity must match the point dimension");
  if (c.command == "variation") require(!c.deltaq.empty(), "variation needs deltaq expressions");
  if (c.command == "burgers") require(!c.loop_path.empty() || !c.loop.empty(), "burgers needs a loop");
}

}  // namespace nonholo
