// nonholo: command-line front end.
//
//   nonholo tensors  --chart sphere.json --at 1.0,0.5
//   nonholo spectrum --manifold ring --r 1 --measure qep
//   nonholo burgers  --chart dislocation.json --loop square.json
//   nonholo --config data/configs/spectrum_sphere.json
//
// Flags override fields of the optional --config file.

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <map>
#include <vector>

#include "nonholo/errors.hpp"
#include "nonholo/runner.hpp"

using namespace nonholo;

namespace {

struct Flags {
  std::string chart;
  std::vector<std::string> params;
  std::vector<double> at, velocity, ladder;
  double t0 = 0, t1 = 1, step = 1e-3, r = 1, mass = 1, hbar = 1, eps = 0.01, degeneracy_tol = 0.02;
  std::vector<std::string> deltaq;
  std::string loop, manifold, measure, profile, out, format;
  int samples = 8, points = 256, n_theta = 64, n_phi = 128, order = 1, levels = 7;
};

using Apply = std::function<void(RunConfig&)>;

// Registers the shared flags on one subcommand; each set flag contributes an
// override applied after the config file is loaded.
void add_flags(CLI::App* sub, Flags& f, std::vector<std::pair<CLI::Option*, Apply>>& ops) {
  auto add = [&](CLI::Option* o, Apply a) { ops.emplace_back(o, std::move(a)); };
  add(sub->add_option("--chart", f.chart, "chart file"), [&](RunConfig& c) { c.chart_path = f.chart; c.chart.reset(); });
  add(sub->add_option("--param", f.params, "chart parameter override name=value"), [&](RunConfig& c) {
    for (const auto& p : f.params) {
      const auto eq = p.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::Validation, "--param expects name=value");
      c.chart_params[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
    }
  });
  add(sub->add_option("--at", f.at, "point q1,q2,...")->delimiter(','), [&](RunConfig& c) { c.point = f.at; });
  add(sub->add_option("--velocity", f.velocity, "initial velocity")->delimiter(','),
      [&](RunConfig& c) { c.velocity = f.velocity; });
  add(sub->add_option("--t0", f.t0, "start time"), [&](RunConfig& c) { c.t0 = f.t0; });
  add(sub->add_option("--t1", f.t1, "end time"), [&](RunConfig& c) { c.t1 = f.t1; });
  add(sub->add_option("--step", f.step, "integration step"), [&](RunConfig& c) { c.step = f.step; });
  add(sub->add_option("--deltaq", f.deltaq, "variation component in t, ta, tb (repeat per component)"),
      [&](RunConfig& c) { c.deltaq = f.deltaq; });
  add(sub->add_option("--loop", f.loop, "loop file"), [&](RunConfig& c) { c.loop_path = f.loop; c.loop.clear(); });
  add(sub->add_option("--samples-per-edge", f.samples, "initial loop samples per edge"),
      [&](RunConfig& c) { c.samples_per_edge = f.samples; });
  add(sub->add_option("--manifold", f.manifold, "ring | sphere"), [&](RunConfig& c) { c.manifold = f.manifold; });
  add(sub->add_option("--r", f.r, "manifold radius"), [&](RunConfig& c) { c.radius = f.r; });
  add(sub->add_option("--points", f.points, "ring grid points"), [&](RunConfig& c) { c.points = f.points; });
  add(sub->add_option("--n-theta", f.n_theta, "sphere latitudes"), [&](RunConfig& c) { c.n_theta = f.n_theta; });
  add(sub->add_option("--n-phi", f.n_phi, "sphere longitudes"), [&](RunConfig& c) { c.n_phi = f.n_phi; });
  add(sub->add_option("--measure", f.measure, "naive | qep | qep_veff"), [&](RunConfig& c) { c.measure = f.measure; });
  add(sub->add_option("--mass", f.mass, "particle mass"), [&](RunConfig& c) { c.mass = f.mass; });
  add(sub->add_option("--hbar", f.hbar, "Planck constant"), [&](RunConfig& c) { c.hbar = f.hbar; });
  add(sub->add_option("--eps", f.eps, "time slice"), [&](RunConfig& c) { c.epsilon = f.eps; });
  add(sub->add_option("--ladder", f.ladder, "eps ladder for extrapolation")->delimiter(','),
      [&](RunConfig& c) { c.eps_ladder = f.ladder; });
  add(sub->add_option("--richardson-order", f.order, "extrapolation order"),
      [&](RunConfig& c) { c.richardson_order = f.order; });
  add(sub->add_option("--levels", f.levels, "number of levels"), [&](RunConfig& c) { c.n_levels = f.levels; });
  add(sub->add_option("--degeneracy-tol", f.degeneracy_tol, "grouping tolerance in hbar^2/(M r^2)"),
      [&](RunConfig& c) { c.degeneracy_tol = f.degeneracy_tol; });
  add(sub->add_option("--profile", f.profile, "tolerance profile"), [&](RunConfig& c) { c.tolerance_profile = f.profile; });
  add(sub->add_option("--out", f.out, "output file (default stdout)"), [&](RunConfig& c) { c.output_path = f.out; });
  add(sub->add_option("--format", f.format, "json | csv"), [&](RunConfig& c) { c.output_format = f.format; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metric-affine geometry, defect and sliced path-integral toolkit"};
  std::string config_path;
  app.add_option("--config", config_path, "run configuration JSON");

  Flags flags;
  std::vector<std::pair<CLI::Option*, Apply>> ops;
  std::map<std::string, CLI::App*> subs;
  for (const char* name : {"tensors", "geodesic", "autoparallel", "variation", "burgers", "amplitude", "spectrum"}) {
    CLI::App* sub = app.add_subcommand(name);
    add_flags(sub, flags, ops);
    subs[name] = sub;
  }
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << error_json(ErrorKind::Validation, e.what()).dump() << "\n";
    return 2;
  }

  RunConfig cfg;
  std::filesystem::path base_dir;
  try {
    if (!config_path.empty()) {
      cfg = parse_run_config_file(config_path);
      base_dir = std::filesystem::path(config_path).parent_path();
    }
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) cfg.command = name;
    for (const auto& [opt, apply] : ops)
      if (opt->count() > 0) apply(cfg);
  } catch (const Error& e) {
    std::cout << error_json(e.kind(), e.what()).dump() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cout << error_json(ErrorKind::Validation, e.what()).dump() << "\n";
    return 2;
  }
  return run(cfg, std::cout, base_dir);
}
