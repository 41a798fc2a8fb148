#include "nonholo/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "nonholo/errors.hpp"

namespace nonholo {

namespace {

Vec acceleration(const Tensor3& c, const Vec& v) {
  const int D = static_cast<int>(v.size());
  Vec a = Vec::Zero(D);
  for (int m = 0; m < D; ++m)
    for (int l = 0; l < D; ++l)
      for (int n = 0; n < D; ++n) a[m] -= c(l, n, m) * v[l] * v[n];
  return a;
}

Trajectory integrate(const Chart& chart, const Coord& q0, const Vec& qdot0, TimeSpan span, double step,
                     bool affine) {
  if (!(step > 0)) throw Error(ErrorKind::Validation, "integration step must be positive");
  if (!(span.t1 > span.t0)) throw Error(ErrorKind::Validation, "time span must have t1 > t0");
  if (qdot0.size() != chart.dim())
    throw Error(ErrorKind::DimensionMismatch, "initial velocity has wrong dimension");
  chart.require_admitted(q0);

  const long n = std::max(1L, std::lround((span.t1 - span.t0) / step));
  const double h = (span.t1 - span.t0) / static_cast<double>(n);
  auto conn = [&](const Coord& q) {
    auto b = connection_bundle(chart, q, 1);
    return affine ? b.gamma : b.gamma_bar;
  };

  Trajectory traj;
  traj.states.reserve(static_cast<std::size_t>(n) + 1);
  Coord q = q0;
  Vec v = qdot0;
  traj.states.push_back({span.t0, q, v});
  for (long k = 0; k < n; ++k) {
    try {
      Vec k1q = v;
      Vec k1v = acceleration(conn(q), v);
      Vec k2q = v + 0.5 * h * k1v;
      Vec k2v = acceleration(conn(q + 0.5 * h * k1q), k2q);
      Vec k3q = v + 0.5 * h * k2v;
      Vec k3v = acceleration(conn(q + 0.5 * h * k2q), k3q);
      Vec k4q = v + h * k3v;
      Vec k4v = acceleration(conn(q + h * k3q), k4q);
      q += h / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q);
      v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
      chart.require_admitted(q);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularPoint && e.kind() != ErrorKind::DegenerateTriad) throw;
      traj.truncated = true;
      traj.truncation_reason = e.what();
      break;
    }
    traj.states.push_back({span.t0 + static_cast<double>(k + 1) * h, q, v});
  }
  return traj;
}

}  // namespace

Trajectory integrate_geodesic(const Chart& chart, const Coord& q0, const Vec& qdot0, TimeSpan span,
                              double step) {
  return integrate(chart, q0, qdot0, span, step, false);
}

Trajectory integrate_autoparallel(const Chart& chart, const Coord& q0, const Vec& qdot0, TimeSpan span,
                                  double step) {
  return integrate(chart, q0, qdot0, span, step, true);
}

double kinetic_energy(const Chart& chart, const TrajectoryState& s, double mass) {
  return 0.5 * mass * s.qdot.dot(chart.metric(s.q) * s.qdot);
}

VariationExpr::VariationExpr(std::vector<std::string> components, std::map<std::string, double> params)
    : sources_(std::move(components)), params_(std::move(params)) {
  if (sources_.empty()) throw Error(ErrorKind::Validation, "variation needs at least one component");
  SymbolTable symbols{{"t", "ta", "tb"}, params_};
  for (const auto& s : sources_) exprs_.push_back(Expression::parse(s, symbols));
}

Vec VariationExpr::operator()(double t, double ta, double tb) const {
  const double vars[3] = {t, ta, tb};
  Vec out(dim());
  for (int k = 0; k < dim(); ++k) out[k] = exprs_[k](std::span<const double>(vars, 3));
  return out;
}

std::vector<Vec> solve_variation_ode(const std::vector<double>& t, const std::vector<Mat>& G,
                                     const std::vector<Mat>& Sigma, const std::vector<Vec>& deltaq) {
  const std::size_t n = t.size();
  if (n < 2 || G.size() != n || Sigma.size() != n || deltaq.size() != n)
    throw Error(ErrorKind::GridMismatch, "variation inputs must share one time grid of >= 2 samples");
  const int D = static_cast<int>(deltaq.front().size());
  std::vector<Vec> db(n, Vec::Zero(D));
  Vec f_prev = Sigma[0] * deltaq[0];
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double h = t[k + 1] - t[k];
    if (!(h > 0)) throw Error(ErrorKind::GridMismatch, "variation time grid must increase");
    const Mat U = (-0.5 * h * (G[k] + G[k + 1])).exp();
    const Vec f_next = Sigma[k + 1] * deltaq[k + 1];
    db[k + 1] = U * db[k] + 0.5 * h * (U * f_prev + f_next);
    f_prev = f_next;
  }
  return db;
}

VariationRun nonholonomic_variation(const Chart& chart, const Trajectory& base, const VariationExpr& deltaq,
                                    const Tolerances& tol) {
  if (base.truncated) throw Error(ErrorKind::GridMismatch, "base trajectory was truncated");
  if (base.states.size() < 2) throw Error(ErrorKind::GridMismatch, "base trajectory needs >= 2 samples");
  if (deltaq.dim() != chart.dim())
    throw Error(ErrorKind::DimensionMismatch, "variation has " + std::to_string(deltaq.dim()) +
                                                  " components, chart dim is " +
                                                  std::to_string(chart.dim()));
  const int D = chart.dim();
  const double ta = base.states.front().t;
  const double tb = base.states.back().t;
  VariationRun run;
  for (const auto& s : base.states) {
    run.t.push_back(s.t);
    run.deltaq.push_back(deltaq(s.t, ta, tb));
    auto b = connection_bundle(chart, s.q, 1);
    Mat G = Mat::Zero(D, D);
    Mat Sg = Mat::Zero(D, D);
    for (int m = 0; m < D; ++m)
      for (int l = 0; l < D; ++l)
        for (int n = 0; n < D; ++n) {
          G(m, l) += b.gamma(l, n, m) * s.qdot[n];
          Sg(m, l) += 2.0 * b.torsion(n, l, m) * s.qdot[n];
        }
    run.G.push_back(G);
    run.Sigma.push_back(Sg);
  }
  if (run.deltaq.front().lpNorm<Eigen::Infinity>() > tol.endpoint_tolerance ||
      run.deltaq.back().lpNorm<Eigen::Infinity>() > tol.endpoint_tolerance)
    throw Error(ErrorKind::Validation, "holonomic variation must vanish at both end times");
  run.deltab = solve_variation_ode(run.t, run.G, run.Sigma, run.deltaq);
  return run;
}

std::vector<ResidualSample> torsion_el_residual(const Chart& chart, const Trajectory& traj, double mass) {
  const auto& s = traj.states;
  if (s.size() < 5) throw Error(ErrorKind::InsufficientSampling, "residual needs at least 5 samples");
  const double h = s[1].t - s[0].t;
  for (std::size_t k = 1; k < s.size(); ++k)
    if (std::abs((s[k].t - s[k - 1].t) - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw Error(ErrorKind::InsufficientSampling, "residual needs an evenly sampled trajectory");
  const int D = chart.dim();

  std::vector<ResidualSample> out;
  for (std::size_t k = 2; k + 2 < s.size(); ++k) {
    const Vec& qm2 = s[k - 2].q;
    const Vec& qm1 = s[k - 1].q;
    const Vec& q0 = s[k].q;
    const Vec& qp1 = s[k + 1].q;
    const Vec& qp2 = s[k + 2].q;
    const Vec v = (-qp2 + 8.0 * qp1 - 8.0 * qm1 + qm2) / (12.0 * h);
    const Vec a = (-qp2 + 16.0 * qp1 - 30.0 * q0 + 16.0 * qm1 - qm2) / (12.0 * h * h);
    auto b = connection_bundle(chart, q0, 1);
    const Vec p = mass * b.metric * v;  // dL/dq'
    Vec r = Vec::Zero(D);
    for (int l = 0; l < D; ++l) {
      double dLdq = 0, dpdt = 0, force = 0;
      for (int m = 0; m < D; ++m)
        for (int n = 0; n < D; ++n) {
          dLdq += 0.5 * mass * b.dmetric(l, m, n) * v[m] * v[n];
          dpdt += mass * b.dmetric(m, l, n) * v[m] * v[n];
          force += 2.0 * b.torsion(l, m, n) * v[m] * p[n];
        }
      for (int n = 0; n < D; ++n) dpdt += mass * b.metric(l, n) * a[n];
      r[l] = dLdq - dpdt - force;
    }
    out.push_back({s[k].t, r});
  }
  return out;
}

double max_residual(const std::vector<ResidualSample>& r) {
  double worst = 0;
  for (const auto& x : r) worst = std::max(worst, x.residual.lpNorm<Eigen::Infinity>());
  return worst;
}

Vec commutation_defect(const Chart& chart, const Coord& q, const Vec& qdot, const Vec& deltaq) {
  auto b = connection_bundle(chart, q, 1);
  const int D = chart.dim();
  Vec out = Vec::Zero(D);
  for (int l = 0; l < D; ++l)
    for (int m = 0; m < D; ++m)
      for (int n = 0; n < D; ++n) out[l] += 2.0 * b.torsion(m, n, l) * qdot[m] * deltaq[n];
  return out;
}

}  // namespace nonholo
