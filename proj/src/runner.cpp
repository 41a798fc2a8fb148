#include "nonholo/runner.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "nonholo/chart_io.hpp"
#include "nonholo/connection.hpp"
#include "nonholo/curvature.hpp"
#include "nonholo/defects.hpp"
#include "nonholo/dynamics.hpp"
#include "nonholo/propagator.hpp"
#include "nonholo/short_time.hpp"

namespace nonholo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kConfigPrefix = "# config: ";

json to_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json to_json(const Mat& m) {
  json out = json::array();
  for (int r = 0; r < m.rows(); ++r) out.push_back(to_json(Vec(m.row(r).transpose())));
  return out;
}

json to_json(const Tensor3& t) {
  json out = json::array();
  for (int a = 0; a < t.extent(0); ++a) {
    json A = json::array();
    for (int b = 0; b < t.extent(1); ++b) {
      json B = json::array();
      for (int c = 0; c < t.extent(2); ++c) B.push_back(t(a, b, c));
      A.push_back(B);
    }
    out.push_back(A);
  }
  return out;
}

json to_json(const Tensor4& t) {
  json out = json::array();
  for (int a = 0; a < t.extent(0); ++a) {
    json A = json::array();
    for (int b = 0; b < t.extent(1); ++b) {
      json B = json::array();
      for (int c = 0; c < t.extent(2); ++c) {
        json C = json::array();
        for (int d = 0; d < t.extent(3); ++d) C.push_back(t(a, b, c, d));
        B.push_back(C);
      }
      A.push_back(B);
    }
    out.push_back(A);
  }
  return out;
}

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

// CSV writer: a config comment line, a header, then rows.
class Csv {
 public:
  explicit Csv(const json& config) { os_ << kConfigPrefix << config.dump() << "\n"; }
  void header(const std::vector<std::string>& cols) { line(cols); }
  void row(const std::vector<double>& v) {
    std::vector<std::string> s;
    for (double x : v) s.push_back(fmt(x));
    line(s);
  }
  void line(const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) os_ << (k ? "," : "") << cells[k];
    os_ << "\n";
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

fs::path locate(const std::string& name, const fs::path& base_dir, const char* data_subdir) {
  const fs::path p(name);
  std::vector<fs::path> candidates;
  if (p.is_absolute()) {
    candidates.push_back(p);
  } else {
    if (!base_dir.empty()) candidates.push_back(base_dir / p);
    candidates.push_back(p);
    candidates.push_back(fs::path(NONHOLO_DATA_DIR) / data_subdir / p);
    candidates.push_back(fs::path(NONHOLO_DATA_DIR) / p);
  }
  for (const auto& c : candidates)
    if (fs::is_regular_file(c)) return c;
  throw Error(ErrorKind::Io, "input file not found: '" + name + "'");
}

Chart load_chart(const RunConfig& c, const Tolerances& tol, const fs::path& base) {
  ChartSpec spec = c.chart ? *c.chart : parse_chart_text(read_text_file(locate(c.chart_path, base, "charts")));
  for (const auto& [k, v] : c.chart_params) spec.params[k] = v;
  return Chart(spec, tol);
}

std::vector<Coord> vertices_from_json(const json& j) {
  std::vector<Coord> out;
  for (const auto& v : j) out.push_back(to_vec(v.get<std::vector<double>>()));
  return out;
}

LoopSpec load_loop(const RunConfig& c, const fs::path& base) {
  LoopSpec loop;
  loop.samples_per_edge = c.samples_per_edge;
  if (!c.loop.empty()) {
    for (const auto& v : c.loop) loop.vertices.push_back(to_vec(v));
  } else {
    const fs::path path = locate(c.loop_path, base, "loops");
    json j;
    try {
      j = json::parse(read_text_file(path));
      if (j.is_array()) {
        loop.vertices = vertices_from_json(j);
      } else {
        loop.vertices = vertices_from_json(j.at("vertices"));
        if (j.contains("samples_per_edge")) loop.samples_per_edge = j.at("samples_per_edge").get<int>();
      }
    } catch (const json::exception& e) {
      throw Error(ErrorKind::Parse, "malformed loop file '" + path.string() + "': " + e.what());
    }
  }
  // A vertex list may omit the closing vertex.
  if (!loop.vertices.empty() && loop.vertices.front() != loop.vertices.back())
    loop.vertices.push_back(loop.vertices.front());
  loop.validate();
  return loop;
}

Manifold manifold_of(const RunConfig& c) {
  if (c.manifold == "ring") return RingManifold{c.radius, c.points};
  return SphereManifold{c.radius, c.n_theta, c.n_phi};
}

ShortTimeConfig short_time_of(const RunConfig& c) {
  ShortTimeConfig s;
  s.mass = c.mass;
  s.hbar = c.hbar;
  s.epsilon = c.epsilon;
  return s;
}

std::string render(const json& body) { return body.dump(2) + "\n"; }

std::string cmd_tensors(const RunConfig& c, const json& config, const Tolerances& tol, const fs::path& base) {
  const Chart chart = load_chart(c, tol, base);
  const Coord q = to_vec(c.point);
  if (q.size() != chart.dim()) throw Error(ErrorKind::DimensionMismatch, "point dimension differs from the chart");
  const ConnectionBundle geo = connection_bundle(chart, q, 2);
  const CurvatureBundle curv = curvature_bundle(geo);
  const ConnectionResiduals res = connection_residuals(geo);
  const double relation = curvature_relation_check(geo);

  if (c.output_format == "csv") {
    Csv csv(config);
    csv.header({"tensor", "index", "value"});
    auto emit = [&](const std::string& name, const std::string& idx, double v) { csv.line({name, idx, fmt(v)}); };
    const int D = geo.dim();
    for (int a = 0; a < D; ++a)
      for (int b = 0; b < D; ++b) emit("metric", std::to_string(a) + "." + std::to_string(b), geo.metric(a, b));
    auto t3 = [&](const std::string& name, const Tensor3& t) {
      for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b)
          for (int k = 0; k < D; ++k)
            emit(name, std::to_string(a) + "." + std::to_string(b) + "." + std::to_string(k), t(a, b, k));
    };
    auto t4 = [&](const std::string& name, const Tensor4& t) {
      for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b)
          for (int k = 0; k < D; ++k)
            for (int l = 0; l < D; ++l)
              emit(name, std::to_string(a) + "." + std::to_string(b) + "." + std::to_string(k) + "." + std::to_string(l),
                   t(a, b, k, l));
    };
    t3("christoffel", geo.gamma_bar);
    t3("affine_connection", geo.gamma);
    t3("torsion", geo.torsion);
    t3("contortion", geo.contortion);
    t4("riemann_curvature", curv.riemann);
    t4("cartan_curvature", curv.cartan);
    emit("riemann_scalar", "", curv.riemann_summary.scalar);
    emit("cartan_scalar", "", curv.cartan_summary.scalar);
    return csv.str();
  }

  json out;
  out["config"] = config;
  out["command"] = "tensors";
  out["chart"] = chart.name();
  out["point"] = c.point;
  out["triad"] = to_json(geo.triad);
  out["metric"] = to_json(geo.metric);
  out["inverse_metric"] = to_json(geo.inverse_metric);
  out["volume_element"] = chart.volume_element(q);
  out["christoffel_first"] = to_json(geo.gamma_bar_first);
  out["christoffel"] = to_json(geo.gamma_bar);
  out["affine_connection"] = to_json(geo.gamma);
  out["torsion"] = to_json(geo.torsion);
  out["torsion_trace"] = to_json(geo.torsion_trace);
  out["contortion"] = to_json(geo.contortion);
  out["riemann_curvature"] = to_json(curv.riemann);
  out["cartan_curvature"] = to_json(curv.cartan);
  out["ricci"] = to_json(curv.riemann_summary.ricci);
  out["scalar"] = curv.riemann_summary.scalar;
  out["einstein"] = to_json(curv.riemann_summary.einstein);
  out["cartan_ricci"] = to_json(curv.cartan_summary.ricci);
  out["cartan_scalar"] = curv.cartan_summary.scalar;
  out["residuals"] = {{"christoffel_symmetry", res.christoffel_symmetry},
                      {"torsion_antisymmetry", res.torsion_antisymmetry},
                      {"contortion_antisymmetry", res.contortion_antisymmetry},
                      {"decomposition", res.decomposition},
                      {"trace_identity", res.trace_identity},
                      {"metricity", res.metricity},
                      {"curvature_relation", relation}};
  return render(out);
}

std::string cmd_trajectory(const RunConfig& c, const json& config, const Tolerances& tol, const fs::path& base) {
  const Chart chart = load_chart(c, tol, base);
  const Coord q0 = to_vec(c.point);
  const Vec v0 = to_vec(c.velocity);
  if (q0.size() != chart.dim()) throw Error(ErrorKind::DimensionMismatch, "point dimension differs from the chart");
  const bool geodesic = c.command == "geodesic";
  const Trajectory traj = geodesic ? integrate_geodesic(chart, q0, v0, {c.t0, c.t1}, c.step)
                                   : integrate_autoparallel(chart, q0, v0, {c.t0, c.t1}, c.step);
  const int D = chart.dim();

  if (c.output_format == "csv") {
    Csv csv(config);
    std::vector<std::string> cols{"t"};
    for (int m = 1; m <= D; ++m) cols.push_back("q" + std::to_string(m));
    for (int m = 1; m <= D; ++m) cols.push_back("qdot" + std::to_string(m));
    cols.push_back("energy");
    csv.header(cols);
    for (const auto& s : traj.states) {
      std::vector<double> row{s.t};
      for (int m = 0; m < D; ++m) row.push_back(s.q[m]);
      for (int m = 0; m < D; ++m) row.push_back(s.qdot[m]);
      row.push_back(kinetic_energy(chart, s, c.mass));
      csv.row(row);
    }
    return csv.str();
  }

  json out;
  out["config"] = config;
  out["command"] = c.command;
  out["chart"] = chart.name();
  out["truncated"] = traj.truncated;
  out["truncation_reason"] = traj.truncation_reason;
  json states = json::array();
  for (const auto& s : traj.states)
    states.push_back({{"t", s.t}, {"q", to_json(s.q)}, {"qdot", to_json(s.qdot)},
                      {"energy", kinetic_energy(chart, s, c.mass)}});
  out["states"] = states;
  out["el_residual_max"] =
      traj.states.size() >= 5 ? json(max_residual(torsion_el_residual(chart, traj, c.mass))) : json(nullptr);
  return render(out);
}

std::string cmd_variation(const RunConfig& c, const json& config, const Tolerances& tol, const fs::path& base) {
  const Chart chart = load_chart(c, tol, base);
  const Coord q0 = to_vec(c.point);
  if (q0.size() != chart.dim()) throw Error(ErrorKind::DimensionMismatch, "point dimension differs from the chart");
  const Trajectory traj = integrate_autoparallel(chart, q0, to_vec(c.velocity), {c.t0, c.t1}, c.step);
  const VariationRun run = nonholonomic_variation(chart, traj, VariationExpr(c.deltaq), tol);
  const int D = chart.dim();

  if (c.output_format == "csv") {
    Csv csv(config);
    std::vector<std::string> cols{"t"};
    for (int m = 1; m <= D; ++m) cols.push_back("deltaq" + std::to_string(m));
    for (int m = 1; m <= D; ++m) cols.push_back("deltab" + std::to_string(m));
    csv.header(cols);
    for (std::size_t k = 0; k < run.t.size(); ++k) {
      std::vector<double> row{run.t[k]};
      for (int m = 0; m < D; ++m) row.push_back(run.deltaq[k][m]);
      for (int m = 0; m < D; ++m) row.push_back(run.deltab[k][m]);
      csv.row(row);
    }
    return csv.str();
  }

  json out;
  out["config"] = config;
  out["command"] = "variation";
  out["chart"] = chart.name();
  out["t"] = run.t;
  json dq = json::array(), db = json::array();
  for (std::size_t k = 0; k < run.t.size(); ++k) {
    dq.push_back(to_json(run.deltaq[k]));
    db.push_back(to_json(run.deltab[k]));
  }
  out["deltaq"] = dq;
  out["deltab"] = db;
  out["deltab_final"] = to_json(run.deltab.back());
  return render(out);
}

std::string cmd_burgers(const RunConfig& c, const json& config, const Tolerances& tol, const fs::path& base) {
  const Chart chart = load_chart(c, tol, base);
  if (chart.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "burgers needs a 2-D chart");
  const LoopSpec loop = load_loop(c, base);
  const BurgersResult b = burgers_vector(chart, loop);
  const double winding = winding_integral(angle_gradient_field(), loop, tol);
  const double frank = chart.ambient() == 2 ? frank_angle(chart, loop) : 0.0;

  if (c.output_format == "csv") {
    Csv csv(config);
    csv.header({"quantity", "value"});
    csv.line({"b1", fmt(b.b[0])});
    csv.line({"b2", fmt(b.b[1])});
    csv.line({"b1_over_2pi", fmt(b.b_over_2pi[0])});
    csv.line({"b2_over_2pi", fmt(b.b_over_2pi[1])});
    csv.line({"winding", fmt(winding)});
    csv.line({"winding_number", fmt(b.winding)});
    csv.line({"frank_angle", fmt(frank)});
    return csv.str();
  }

  json out;
  out["config"] = config;
  out["command"] = "burgers";
  out["chart"] = chart.name();
  out["b"] = to_json(b.b);
  out["b_over_2pi"] = to_json(b.b_over_2pi);
  out["winding"] = winding;
  out["winding_number"] = b.winding;
  out["frank_angle"] = frank;
  return render(out);
}

std::string cmd_amplitude(const RunConfig& c, const json& config, const Tolerances& tol) {
  const SlicedPropagator p =
      build_propagator(manifold_of(c), short_time_of(c), measure_from_string(c.measure), tol, Execution::Parallel);
  const Vec row_sums = p.kernel.rowwise().sum();
  const int n = std::min(c.n_levels, p.size());
  const std::vector<double> levels = kernel_levels(p, n);

  if (c.output_format == "csv") {
    Csv csv(config);
    csv.header({"level", "energy"});
    for (int k = 0; k < n; ++k) csv.row({static_cast<double>(k), levels[static_cast<std::size_t>(k)]});
    return csv.str();
  }

  json out;
  out["config"] = config;
  out["command"] = "amplitude";
  out["manifold"] = c.manifold;
  out["measure_mode"] = c.measure;
  out["epsilon"] = c.epsilon;
  out["nodes"] = p.size();
  out["stored_rows"] = p.kernel.rows();
  out["sigma"] = p.sigma;
  out["max_hop"] = p.max_hop;
  out["cutoff"] = p.cutoff;
  out["row_sum_min"] = row_sums.minCoeff();
  out["row_sum_max"] = row_sums.maxCoeff();
  out["max_entry"] = p.kernel.maxCoeff();
  out["levels"] = levels;
  return render(out);
}

std::string cmd_spectrum(const RunConfig& c, const json& config, const Tolerances& tol) {
  SpectrumOptions opts;
  opts.n_levels = c.n_levels;
  opts.eps_ladder = c.eps_ladder;
  opts.richardson_order = c.richardson_order;
  opts.degeneracy_tol = c.degeneracy_tol;
  const SpectrumResult s =
      extract_spectrum(manifold_of(c), short_time_of(c), measure_from_string(c.measure), opts, tol);

  if (c.output_format == "csv") {
    Csv csv(config);
    std::vector<std::string> cols{"level"};
    for (double e : s.eps) cols.push_back("eps_" + fmt(e));
    cols.push_back("extrapolated");
    csv.header(cols);
    for (int k = 0; k < c.n_levels; ++k) {
      std::vector<double> row{static_cast<double>(k)};
      for (const auto& lv : s.levels) row.push_back(lv[static_cast<std::size_t>(k)]);
      row.push_back(s.extrapolated[static_cast<std::size_t>(k)]);
      csv.row(row);
    }
    return csv.str();
  }

  json out;
  out["config"] = config;
  out["command"] = "spectrum";
  out["manifold"] = c.manifold;
  out["measure_mode"] = to_string(s.measure);
  out["eps_ladder"] = s.eps;
  out["energy_unit"] = c.hbar * c.hbar / (c.mass * c.radius * c.radius);
  out["levels"] = s.levels;
  out["extrapolated"] = s.extrapolated;
  json groups = json::array();
  for (const auto& g : s.groups) groups.push_back({{"energy", g.energy}, {"degeneracy", g.degeneracy}});
  out["groups"] = groups;
  std::vector<int> pattern;
  for (const auto& g : s.groups) pattern.push_back(g.degeneracy);
  out["degeneracies"] = pattern;
  return render(out);
}

}  // namespace

RunConfig resolve(const RunConfig& cfg) {
  RunConfig r = cfg;
  if (r.tolerance_profile.empty()) r.tolerance_profile = default_tolerances().profile;
  return r;
}

std::string execute(const RunConfig& cfg, const fs::path& base_dir) {
  validate(cfg);
  const RunConfig c = resolve(cfg);
  const Tolerances tol = Tolerances::from_profile(c.tolerance_profile);
  const json config = run_config_to_json(c);
  if (c.command == "tensors") return cmd_tensors(c, config, tol, base_dir);
  if (c.command == "geodesic" || c.command == "autoparallel") return cmd_trajectory(c, config, tol, base_dir);
  if (c.command == "variation") return cmd_variation(c, config, tol, base_dir);
  if (c.command == "burgers") return cmd_burgers(c, config, tol, base_dir);
  if (c.command == "amplitude") return cmd_amplitude(c, config, tol);
  return cmd_spectrum(c, config, tol);
}

int exit_code(ErrorKind kind) { return is_validation_error(kind) ? 2 : 3; }

json error_json(ErrorKind kind, const std::string& message) {
  return {{"error", {{"kind", std::string(to_string(kind))}, {"message", message}}}};
}

int run(const RunConfig& cfg, std::ostream& out, const fs::path& base_dir) {
  try {
    const std::string artifact = execute(cfg, base_dir);
    if (cfg.output_path.empty()) {
      out << artifact;
    } else {
      std::ofstream f(cfg.output_path, std::ios::binary);
      if (!f) throw Error(ErrorKind::Io, "cannot write '" + cfg.output_path + "'");
      f << artifact;
    }
    return 0;
  } catch (const Error& e) {
    out << error_json(e.kind(), e.what()).dump() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    out << error_json(ErrorKind::Validation, e.what()).dump() << "\n";
    return 2;
  }
}

RunConfig embedded_config(const std::string& artifact) {
  if (artifact.rfind(kConfigPrefix, 0) == 0) {
    const auto end = artifact.find('\n');
    const std::size_t n = std::string(kConfigPrefix).size();
    return run_config_from_json(json::parse(artifact.substr(n, end - n)));
  }
  return run_config_from_json(json::parse(artifact).at("config"));
}

}  // namespace nonholo
