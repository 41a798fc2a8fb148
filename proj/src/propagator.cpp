#include "nonholo/propagator.hpp"

#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <numbers>

#include "nonholo/errors.hpp"
#include "nonholo/kernel_assembly.hpp"

namespace nonholo {

namespace {

constexpr double kPi = std::numbers::pi;
// Largest physical distance kept on the sphere; the rotated chart stays far
// from its own poles inside this radius.
constexpr double kSphereValidity = 0.45 * kPi;

double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2 * kPi);
  if (a < 0) a += 2 * kPi;
  return a - kPi;
}

// Jacobian exponent (plus the effective-potential term when requested).
double measure_exponent(const ShortTimeExpansion& ex, const Vec& dq, MeasureMode measure, double veff_term) {
  switch (measure) {
    case MeasureMode::NaiveDeWitt: return naive_jacobian(ex, dq);
    case MeasureMode::QEP: return qep_jacobian(ex, dq);
    case MeasureMode::QEPviaVeff: return naive_jacobian(ex, dq) + veff_term;
  }
  return 0.0;
}

struct RowContext {
  const ShortTimeConfig& cfg;
  MeasureMode measure;
  double cutoff;
  double veff_term;
};

// One kernel row given, for every column, the displacement dq (postpoint
// minus prepoint, in the chart where the postpoint expansion `ex` lives), the
// coordinate-measure weight, and a validity flag.
void fill_row(const RowContext& ctx, const ShortTimeExpansion& ex, int cols,
              const std::function<bool(int, Vec&, double&)>& column, double* out) {
  const double scale = ctx.cfg.mass / (2 * ctx.cfg.epsilon * ctx.cfg.hbar);
  double norm = 0;
  Vec dq;
  double w = 0;
  for (int b = 0; b < cols; ++b) {
    out[b] = 0;
    if (!column(b, dq, w)) continue;
    const double flat = dq.dot(ex.g * dq);
    if (std::sqrt(flat) > ctx.cutoff) continue;
    norm += w * std::exp(-scale * flat);
    double v = w * std::exp(-scale * action_polynomial(ex, dq) + measure_exponent(ex, dq, ctx.measure, ctx.veff_term));
    if (!std::isfinite(v) || !(v > 0))
      throw Error(ErrorKind::NonPositiveKernel, "kernel entry is not positive and finite");
    out[b] = v;
  }
  if (!(norm > 0) || !std::isfinite(norm))
    throw Error(ErrorKind::NonPositiveKernel, "kernel row has no support inside the cutoff");
  for (int b = 0; b < cols; ++b) out[b] /= norm;
}

void check_hop(const SlicedPropagator& p, const Tolerances& tol) {
  if (p.max_hop / p.sigma > tol.max_hop_ratio)
    throw Error(ErrorKind::GridTooCoarse, "grid hop " + std::to_string(p.max_hop) + " exceeds " +
                                              std::to_string(tol.max_hop_ratio) + " kernel widths (" +
                                              std::to_string(p.sigma) + ")");
}

SlicedPropagator build_ring(const RingManifold& ring, SlicedPropagator p, const Tolerances& tol, Execution exec) {
  if (!(ring.radius > 0) || ring.points < 8) throw Error(ErrorKind::Validation, "ring needs radius > 0 and >= 8 points");
  Chart chart(ring_chart_spec(ring.radius), tol);
  const int P = ring.points;
  const double dq = 2 * kPi / P;
  for (int b = 0; b < P; ++b) {
    p.nodes.push_back(Coord::Constant(1, b * dq));
    p.cell.push_back(ring.radius * dq);
  }
  p.max_hop = ring.radius * dq;
  check_hop(p, tol);
  p.cutoff = std::min(tol.kernel_cutoff_widths * p.sigma, kPi * ring.radius);

  std::vector<ShortTimeExpansion> ex;
  std::vector<double> veff;
  for (const auto& q : p.nodes) {
    auto geo = connection_bundle(chart, q, 2);
    ex.push_back(short_time_expansion(geo));
    veff.push_back(effective_potential(geo, p.cfg));
  }
  p.kernel = Mat::Zero(P, P);
  assemble_rows(p.kernel, [&](int a, double* out) {
    RowContext ctx{p.cfg, p.measure, p.cutoff, -p.cfg.epsilon * veff[a] / p.cfg.hbar};
    fill_row(ctx, ex[a], P, [&](int b, Vec& d, double& w) {
      d = Vec::Constant(1, wrap_angle(p.nodes[a][0] - p.nodes[b][0]));
      w = p.cell[b] * ex[a].sqrt_g / ex[b].sqrt_g;
      return true;
    }, out);
  }, exec);
  return p;
}

SlicedPropagator build_sphere(const SphereManifold& sph, SlicedPropagator p, const Tolerances& tol, Execution exec) {
  if (!(sph.radius > 0) || sph.n_theta < 4 || sph.n_phi < 8)
    throw Error(ErrorKind::Validation, "sphere needs radius > 0, n_theta >= 4, n_phi >= 8");
  const double r = sph.radius;
  const int nt = sph.n_theta;
  const int np = sph.n_phi;
  std::vector<double> x, wx;
  gauss_legendre(nt, x, wx);
  std::vector<double> theta(nt), wt(nt);
  for (int j = 0; j < nt; ++j) {
    theta[j] = std::acos(x[nt - 1 - j]);
    wt[j] = wx[nt - 1 - j];
  }
  const double dphi = 2 * kPi / np;
  for (int j = 0; j < nt; ++j)
    for (int k = 0; k < np; ++k) {
      p.nodes.push_back(Coord{{theta[j], k * dphi}});
      p.cell.push_back(r * r * wt[j] * dphi);
    }
  p.max_hop = r * dphi;
  for (int j = 0; j + 1 < nt; ++j) p.max_hop = std::max(p.max_hop, r * (theta[j + 1] - theta[j]));
  check_hop(p, tol);
  p.cutoff = std::min(tol.kernel_cutoff_widths * p.sigma, kSphereValidity * r);

  // Each row is evaluated in a rotated copy of the chart in which its
  // postpoint sits on the equator at longitude 0. The sphere is homogeneous,
  // so one expansion serves every row.
  Chart chart(sphere_chart_spec(r), tol);
  const Coord ref{{kPi / 2, 0.0}};
  auto geo = connection_bundle(chart, ref, 2);
  const ShortTimeExpansion ex = short_time_expansion(geo);
  const double veff_term = -p.cfg.epsilon * effective_potential(geo, p.cfg) / p.cfg.hbar;

  std::vector<Eigen::Vector3d> unit(p.nodes.size());
  for (std::size_t b = 0; b < p.nodes.size(); ++b) {
    const double th = p.nodes[b][0], ph = p.nodes[b][1];
    unit[b] = {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
  }

  p.kernel = Mat::Zero(nt, nt * np);
  assemble_rows(p.kernel, [&](int j, double* out) {
    const double beta = kPi / 2 - theta[j];
    const double cb = std::cos(beta), sb = std::sin(beta);
    RowContext ctx{p.cfg, p.measure, p.cutoff, veff_term};
    fill_row(ctx, ex, nt * np, [&](int b, Vec& d, double& w) {
      const Eigen::Vector3d& n = unit[b];
      const double xr = n.x() * cb + n.z() * sb;
      const double zr = -n.x() * sb + n.z() * cb;
      const double th = std::acos(std::clamp(zr, -1.0, 1.0));
      const double ph = std::atan2(n.y(), xr);
      const double s = std::sin(th);
      if (s < 1e-3) return false;  // far side of the rotated chart
      d = Vec{{kPi / 2 - th, -ph}};
      w = p.cell[b] * ex.sqrt_g / (r * r * s);
      return true;
    }, out);
  }, exec);
  return p;
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw Error(ErrorKind::Validation, "Gauss-Legendre order must be positive");
  auto pos = boost::math::legendre_p_zeros<double>(n);  // non-negative zeros, ascending
  nodes.clear();
  weights.clear();
  auto weight = [n](double x) {
    const double dp = boost::math::legendre_p_prime<double>(n, x);
    return 2.0 / ((1 - x * x) * dp * dp);
  };
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
    if (*it == 0.0) continue;
    nodes.push_back(-*it);
    weights.push_back(weight(*it));
  }
  for (double z : pos) {
    nodes.push_back(z);
    weights.push_back(weight(z));
  }
}

SlicedPropagator build_propagator(const Manifold& manifold, const ShortTimeConfig& cfg, MeasureMode measure,
                                  const Tolerances& tol, Execution exec) {
  cfg.validate();
  if (cfg.mode != TimeMode::ImaginaryTime)
    throw Error(ErrorKind::Validation, "the transfer matrix is built in imaginary time only");
  SlicedPropagator p;
  p.manifold = manifold;
  p.cfg = cfg;
  p.measure = measure;
  p.sigma = std::sqrt(cfg.epsilon * cfg.hbar / cfg.mass);
  if (const auto* ring = std::get_if<RingManifold>(&manifold)) return build_ring(*ring, std::move(p), tol, exec);
  return build_sphere(std::get<SphereManifold>(manifold), std::move(p), tol, exec);
}

Vec SlicedPropagator::apply(const Vec& v, Execution exec) const {
  if (const auto* s = std::get_if<SphereManifold>(&manifold))
    return apply_azimuthal(kernel, s->n_theta, s->n_phi, v, exec);
  return apply_dense(kernel, v, exec);
}

Mat SlicedPropagator::dense() const {
  const auto* s = std::get_if<SphereManifold>(&manifold);
  if (!s) return kernel;
  const int n = size();
  if (n > 4096) throw Error(ErrorKind::Validation, "sphere grid too large for a dense kernel");
  Mat out(n, n);
  for (int j = 0; j < s->n_theta; ++j)
    for (int k = 0; k < s->n_phi; ++k)
      for (int jp = 0; jp < s->n_theta; ++jp)
        for (int kp = 0; kp < s->n_phi; ++kp) {
          int d = kp - k;
          if (d < 0) d += s->n_phi;
          out(j * s->n_phi + k, jp * s->n_phi + kp) = kernel(j, jp * s->n_phi + d);
        }
  return out;
}

Mat compose(const SlicedPropagator& later, const SlicedPropagator& earlier) {
  if (later.size() != earlier.size()) throw Error(ErrorKind::GridMismatch, "propagators live on different grids");
  return later.dense() * earlier.dense();
}

}  // namespace nonholo
