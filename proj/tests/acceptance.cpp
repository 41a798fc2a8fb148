// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "nonholo/connection.hpp"
#include "nonholo/curvature.hpp"
#include "nonholo/defects.hpp"
#include "nonholo/dynamics.hpp"
#include "nonholo/propagator.hpp"
#include "nonholo/runner.hpp"
#include "nonholo/short_time.hpp"
#include "oracles.hpp"

using namespace nonholo;
namespace fs = std::filesystem;

namespace {

const double pi = std::numbers::pi;

// Collects named checks for one criterion.
struct Report {
  bool ok = true;
  std::ostringstream detail;

  void check(bool cond, const std::string& what, double value) {
    if (!cond) ok = false;
    detail << "\n    " << (cond ? "ok   " : "FAIL ") << what << " = " << value;
  }
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<void(Report&)> body;
};

double max_norm(const std::vector<Vec>& v) {
  double m = 0;
  for (const auto& x : v) m = std::max(m, x.lpNorm<Eigen::Infinity>());
  return m;
}

void tensor_identities(Report& rep) {
  struct Case {
    std::string name;
    ChartSpec spec;
    Vec lo, hi;
  };
  const std::vector<Case> cases = {
      {"polar", polar_chart_spec(), Vec{{0.2, -3.0}}, Vec{{3.0, 3.0}}},
      {"sphere", sphere_chart_spec(1.0), Vec{{0.2, -3.0}}, Vec{{2.9, 3.0}}},
      {"dislocation", dislocation_chart_spec(0.1), Vec{{-2.0, -2.0}}, Vec{{2.0, 2.0}}},
      {"disclination", disclination_chart_spec(0.01), Vec{{0.2, -2.0}}, Vec{{2.0, 2.0}}},
      {"synthetic_torsion", synthetic_torsion_chart_spec(0.3), Vec{{-1.5, -1.5}}, Vec{{1.5, 1.5}}},
  };
  for (const auto& c : cases) {
    Chart chart(c.spec);
    auto off_core = [](const Coord& q) { return q.norm() > 0.2; };
    double worst = 0;
    for (const auto& q : oracle::random_points(chart, c.lo, c.hi, 100, 2024, off_core)) {
      auto geo = connection_bundle(chart, q, 2);
      const auto r = connection_residuals(geo);
      worst = std::max({worst, r.christoffel_symmetry, r.torsion_antisymmetry, r.contortion_antisymmetry,
                        r.decomposition, r.trace_identity, r.metricity, curvature_relation_check(geo)});
    }
    rep.check(worst < 1e-6, c.name + " max residual", worst);
  }
}

void flatness(Report& rep) {
  for (const auto& spec : {polar_chart_spec(), synthetic_torsion_chart_spec(0.3)}) {
    Chart chart(spec);
    double worst = 0;
    for (const auto& q : oracle::random_points(chart, Vec{{0.2, -1.5}}, Vec{{2.0, 1.5}}, 50, 7)) {
      auto cb = curvature_bundle(connection_bundle(chart, q, 2));
      worst = std::max({worst, cb.cartan.max_abs(), cb.riemann.max_abs()});
    }
    rep.check(worst < 1e-8, spec.name + " max |curvature|", worst);
  }
  for (double r : {1.0, 2.0}) {
    Chart sph(sphere_chart_spec(r));
    double worst = 0, scalar = 0;
    for (const auto& q : oracle::random_points(sph, Vec{{0.2, -3.0}}, Vec{{2.9, 3.0}}, 50, 9)) {
      scalar = ricci_scalar_einstein(sph, q, CurvatureSource::Riemann).scalar;
      worst = std::max(worst, std::abs(std::abs(scalar) * r * r - 2));
    }
    rep.check(worst < 1e-6, "sphere r=" + std::to_string(r) + " ||R| r^2 - 2|", worst);
    rep.check(true, "sphere scalar r^2 (sign as implemented)", scalar * r * r);
  }
}

void dynamics(Report& rep) {
  Chart sph(sphere_chart_spec(1.0));
  auto gc = integrate_geodesic(sph, Coord{{pi / 2, 0.0}}, Vec{{0.0, 1.0}}, {0, 2 * pi}, 1e-3);
  const auto& e = gc.states.back();
  const double closure = std::max(std::abs(e.q[0] - pi / 2), std::abs(std::remainder(e.q[1], 2 * pi)));
  rep.check(!gc.truncated && std::abs(e.t - 2 * pi) < 1e-12 && closure < 1e-5, "great-circle closure", closure);

  // an inclined great circle also closes
  auto tilted = integrate_geodesic(sph, Coord{{1.0, 0.3}}, Vec{{0.6, 0.8 / std::sin(1.0)}}, {0, 2 * pi}, 1e-3);
  const auto& te = tilted.states.back();
  const double tclose = std::max(std::abs(te.q[0] - 1.0), std::abs(std::remainder(te.q[1] - 0.3, 2 * pi)));
  rep.check(!tilted.truncated && tclose < 1e-5, "inclined great-circle closure", tclose);

  Chart tor(synthetic_torsion_chart_spec(0.3));
  const Coord q0{{0.2, 0.1}};
  const Vec v0{{0.6, 0.8}};
  auto a = integrate_autoparallel(tor, q0, v0, {0, 1}, 1e-3);
  const auto img = oracle::straight_line_image(tor, q0, tor.triad(q0) * v0, 1.0, 1000);
  double dev = 0;
  for (std::size_t k = 0; k < img.size(); ++k) dev = std::max(dev, (a.states[k].q - img[k]).norm());
  rep.check(dev < 1e-5, "autoparallel vs straight-line image", dev);

  auto g = integrate_geodesic(tor, q0, v0, {0, 1}, 1e-3);
  const double ra = max_residual(torsion_el_residual(tor, a));
  const double rg = max_residual(torsion_el_residual(tor, g));
  rep.check(rg >= 10 * ra, "EL residual geodesic / autoparallel", rg / ra);
}

void defects(Report& rep) {
  const auto grad = angle_gradient_field();
  const LoopSpec unit = square_loop(Coord{{0.0, 0.0}}, 1.0);
  const LoopSpec shifted = square_loop(Coord{{0.3, -0.2}}, 0.7);
  LoopSpec tri;
  tri.vertices = {Coord{{2.0, -1.0}}, Coord{{0.0, 2.0}}, Coord{{-1.5, -1.0}}, Coord{{2.0, -1.0}}};
  tri.samples_per_edge = 16;

  const double w = winding_integral(grad, unit);
  rep.check(std::abs(w - 2 * pi) < 1e-6, "|winding - 2 pi|", std::abs(w - 2 * pi));

  const double eps = 0.1;
  auto dis = make_dislocation(eps);
  const Vec b = burgers_vector(dis, unit).b;
  const double berr = (b - Vec{{0.0, 2 * pi * eps}}).lpNorm<Eigen::Infinity>();
  rep.check(berr < 1e-6, "|b - (0, 2 pi eps)|", berr);
  double homotopy = 0;
  for (const auto& loop : {shifted, tri, square_loop(Coord{{0.0, 0.0}}, 3.0)})
    homotopy = std::max(homotopy, (burgers_vector(dis, loop).b - b).lpNorm<Eigen::Infinity>());
  rep.check(homotopy < 1e-6, "Burgers loop dependence", homotopy);

  const double om = 0.01;
  const double f = frank_angle(make_disclination(om), shifted);
  const double rel = std::abs(f + 2 * pi * om) / (2 * pi * om);
  rep.check(rel < 0.02, "Frank angle relative error", rel);
}

void variation(Report& rep) {
  const std::vector<std::string> bump = {"0.05*sin(pi*(t - ta)/(tb - ta))", "0.08*sin(2*pi*(t - ta)/(tb - ta))"};
  VariationExpr dq(bump);
  double worst = 0;
  for (const auto& spec : {polar_chart_spec(), sphere_chart_spec(1.0), disclination_chart_spec(0.01)}) {
    Chart chart(spec);
    auto base = integrate_autoparallel(chart, Coord{{1.0, 0.3}}, Vec{{0.3, 0.5}}, {0, 1}, 1e-3);
    worst = std::max(worst, max_norm(nonholonomic_variation(chart, base, dq).deltab));
  }
  rep.check(worst < 1e-10, "torsion-free max |db|", worst);

  Chart tor(synthetic_torsion_chart_spec(0.3));
  const Coord q0{{0.2, 0.1}};
  const Vec v0{{0.6, 0.8}};
  auto base = integrate_autoparallel(tor, q0, v0, {0, 1}, 1e-3);
  const Vec lib = nonholonomic_variation(tor, base, dq).deltab.back();
  const Vec ref = oracle::variation_endpoint(tor, q0, v0, 0, 1, 1000, [&](double t) { return dq(t, 0, 1); });
  rep.check(lib.norm() > 1e-3, "torsion chart |db(tb)|", lib.norm());
  const double agree = (lib - ref).lpNorm<Eigen::Infinity>();
  rep.check(agree < 1e-6, "solver disagreement", agree);
}

void jacobians(Report& rep) {
  double worst = 0;
  for (const auto& spec : {cartesian_chart_spec(2), polar_chart_spec(), disclination_chart_spec(0.01)}) {
    Chart chart(spec);
    for (const auto& q : oracle::random_points(chart, Vec{{0.4, 0.3}}, Vec{{2.0, 1.5}}, 50, 5))
      for (const Vec& dq : {Vec{{0.03, -0.05}}, Vec{{-0.1, 0.02}}})
        worst = std::max(worst, std::abs(jacobian_action_qep(chart, q, dq) - jacobian_action_naive(chart, q, dq)));
  }
  rep.check(worst < 1e-10, "holonomic |A_J - A_J0|", worst);

  for (double r : {1.0, 2.0}) {
    Chart sph(sphere_chart_spec(r));
    oracle::SphereClosedForm sc{r};
    const Coord q{{1.1, 0.4}};
    const Mat ricci = sc.ricci(q);
    const Vec dir{{0.6, 0.8}};
    double lead = 0;
    for (double h : {0.1, 0.01}) {
      const Vec d = h * dir;
      lead = std::max(lead, std::abs(delta_jacobian(sph, q, d) - d.dot(ricci * d) / 6));
    }
    rep.check(lead < 1e-12, "r=" + std::to_string(r) + " |dA_J - R dq dq / 6|", lead);
    // untruncated cubic-map log Jacobian minus the log volume ratio
    auto err = [&](double h) {
      const Vec d = h * dir;
      const double exact =
          oracle::cubic_map_log_jacobian(sc.gamma(q), sc.dgamma(q), d) - std::log(sc.sqrt_g(q - d) / sc.sqrt_g(q));
      return std::abs(exact - delta_jacobian(sph, q, d));
    };
    double order = 1e9;
    for (double h : {0.08, 0.04, 0.02}) order = std::min(order, std::log2(err(h) / err(h / 2)));
    rep.check(order >= 2.7, "r=" + std::to_string(r) + " observed order", order);
  }
}

ShortTimeConfig unit_cfg(double eps) {
  ShortTimeConfig c;
  c.epsilon = eps;
  return c;
}

void ring_spectrum(Report& rep) {
  SpectrumOptions opts;
  opts.n_levels = 7;
  auto s = extract_spectrum(RingManifold{1.0, 256}, unit_cfg(0.01), MeasureMode::QEP, opts);
  const double unit = oracle::ring_level(1, 1.0);
  rep.check(std::abs(s.extrapolated[0]) < 0.01 * unit, "E_0 / unit", s.extrapolated[0] / unit);
  for (int m = 1; m <= 3; ++m)
    for (int k : {2 * m - 1, 2 * m}) {
      const double rel = std::abs(s.extrapolated[k] / oracle::ring_level(m, 1.0) - 1);
      rep.check(rel < 0.01, "level " + std::to_string(k) + " (m=" + std::to_string(m) + ") rel error", rel);
    }
  std::vector<int> pattern;
  for (const auto& g : s.groups) pattern.push_back(g.degeneracy);
  rep.check(pattern == std::vector<int>{1, 2, 2, 2}, "degeneracy pattern 1,2,2,2", pattern.size());
}

void sphere_spectrum(Report& rep) {
  SpectrumOptions opts;
  opts.n_levels = 9;
  opts.eps_ladder = {0.08, 0.04, 0.02};
  opts.richardson_order = 1;
  const SphereManifold sph{1.0, 64, 128};
  const ShortTimeConfig cfg = unit_cfg(0.02);
  auto qep = extract_spectrum(sph, cfg, MeasureMode::QEP, opts);
  auto naive = extract_spectrum(sph, cfg, MeasureMode::NaiveDeWitt, opts);
  auto veff = extract_spectrum(sph, cfg, MeasureMode::QEPviaVeff, opts);
  const double unit = 1.0;  // hbar^2 / (M r^2)
  const int ls[9] = {0, 1, 1, 1, 2, 2, 2, 2, 2};
  double spacing = 0, shift = 0, equiv = 0;
  for (int k = 0; k < 9; ++k) {
    const double exact = oracle::sphere_level(ls[k], 1.0);
    const double scale = std::max(exact, unit);
    spacing = std::max(spacing, std::abs(qep.extrapolated[k] - exact) / scale);
    shift = std::max(shift, std::abs((naive.extrapolated[k] - qep.extrapolated[k]) / (1.0 / 3) - 1));
    equiv = std::max(equiv, std::abs(veff.extrapolated[k] - qep.extrapolated[k]) / scale);
  }
  rep.check(spacing < 0.03, "QEP vs l(l+1)/2 max rel error", spacing);
  rep.check(shift < 0.05, "naive - QEP shift vs 1/3 max rel error", shift);
  rep.check(equiv < 0.01, "QEP vs QEPviaVeff max rel difference", equiv);
  std::vector<int> pattern;
  for (const auto& g : qep.groups) pattern.push_back(g.degeneracy);
  rep.check(pattern == std::vector<int>{1, 3, 5}, "degeneracy pattern 1,3,5", pattern.size());
}

std::string run_cli(const std::string& args) {
  const fs::path tmp = fs::temp_directory_path() / "nonholo_acceptance.out";
  const std::string cmd = std::string("\"") + NONHOLO_CLI_PATH + "\" " + args + " > \"" + tmp.string() + "\"";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(tmp);
  std::stringstream ss;
  ss << in.rdbuf();
  fs::remove(tmp);
  if (WEXITSTATUS(raw) != 0) return "exit " + std::to_string(WEXITSTATUS(raw));
  return ss.str();
}

void cli(Report& rep) {
  int n = 0, identical = 0, roundtrip = 0;
  for (const auto& e : fs::directory_iterator(fs::path(NONHOLO_DATA_DIR) / "configs")) {
    if (e.path().extension() != ".json") continue;
    ++n;
    const RunConfig c = parse_run_config_file(e.path());
    const std::string a = run_cli("--config \"" + e.path().string() + "\"");
    const std::string b = run_cli("--config \"" + e.path().string() + "\"");
    if (a == b && a.rfind("exit ", 0) != 0 && a == execute(c, e.path().parent_path())) ++identical;
    const RunConfig back = run_config_from_json(nlohmann::json::parse(run_config_to_json(c).dump()));
    if (back == c && embedded_config(a) == resolve(c)) ++roundtrip;
  }
  rep.check(n >= 10 && identical == n, "configs with byte-identical repeated runs", identical);
  rep.check(n >= 10 && roundtrip == n, "configs with config round-trip equality", roundtrip);
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "tensor identity suite", 10, tensor_identities},
      {2, "flatness and sphere scalar", 5, flatness},
      {3, "classical dynamics", 30, dynamics},
      {4, "defect invariants", 5, defects},
      {5, "nonholonomic variation", 10, variation},
      {6, "Jacobian actions", 10, jacobians},
      {7, "ring spectrum", 60, ring_spectrum},
      {8, "sphere spectrum and measure shift", 600, sphere_spectrum},
      {9, "CLI determinism and round-trip", 5, cli},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Report rep;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(rep);
    } catch (const std::exception& e) {
      rep.ok = false;
      rep.detail << "\n    exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.check(secs < c.budget_s, "runtime s (budget " + std::to_string(static_cast<int>(c.budget_s)) + ")", secs);
    if (!rep.ok) ++failures;
    std::printf("%s criterion %d: %s (%.2f s)%s\n", rep.ok ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                rep.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
