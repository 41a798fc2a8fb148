#include "nonholo/defects.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "nonholo/errors.hpp"

namespace nonholo {

namespace {

constexpr int kMaxBisection = 30;
constexpr double kPanelTolerance = 1e-14;

using Gauss8 = boost::math::quadrature::gauss<double, 8>;

Vec panel(const std::function<Vec(const Coord&)>& w, const Coord& a, const Coord& b, double s0, double s1) {
  const Vec d = b - a;
  const double c = 0.5 * (s0 + s1);
  const double h = 0.5 * (s1 - s0);
  const auto& x = Gauss8::abscissa();
  const auto& wt = Gauss8::weights();
  Vec sum;
  auto add = [&](double s, double weight) {
    Vec v = w(a + s * d) * weight;
    if (sum.size() == 0) {
      sum = v;
    } else {
      sum += v;
    }
  };
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] == 0.0) {
      add(c, wt[k]);
    } else {
      add(c + h * x[k], wt[k]);
      add(c - h * x[k], wt[k]);
    }
  }
  return sum * h;
}

Vec adaptive(const std::function<Vec(const Coord&)>& w, const Coord& a, const Coord& b, double s0, double s1,
             const Vec& whole, int depth) {
  const double mid = 0.5 * (s0 + s1);
  Vec left = panel(w, a, b, s0, mid);
  Vec right = panel(w, a, b, mid, s1);
  Vec refined = left + right;
  double scale = std::max(1.0, refined.lpNorm<Eigen::Infinity>());
  if ((refined - whole).lpNorm<Eigen::Infinity>() <= kPanelTolerance * scale) return refined;
  if (depth >= kMaxBisection)
    throw Error(ErrorKind::QuadratureDivergence, "loop quadrature did not converge near a singular point");
  return adaptive(w, a, b, s0, mid, left, depth + 1) + adaptive(w, a, b, mid, s1, right, depth + 1);
}

ChartSpec with_core(ChartSpec spec, double core_radius) {
  spec.params["rc"] = core_radius;
  spec.guard = "q1^2 + q2^2 - rc^2";
  return spec;
}

}  // namespace

ChartSpec dislocation_chart_spec(double epsilon, double core_radius) {
  ChartSpec s;
  s.name = "dislocation";
  s.dim = 2;
  s.kind = ChartKind::TriadField;
  s.params = {{"eps", epsilon}};
  s.exprs = {"1", "0", "-eps*q2/(q1^2 + q2^2)", "1 + eps*q1/(q1^2 + q2^2)"};
  return with_core(s, core_radius);
}

ChartSpec disclination_chart_spec(double omega, double core_radius) {
  ChartSpec s;
  s.name = "disclination";
  s.dim = 2;
  s.kind = ChartKind::HolonomicMap;
  s.params = {{"Om", omega}};
  s.exprs = {"q1 + Om*q2*atan2(q2, q1)", "q2 - Om*q1*atan2(q2, q1)"};
  return with_core(s, core_radius);
}

DefectChart make_dislocation(double epsilon, const Tolerances& tol) {
  if (!std::isfinite(epsilon)) throw Error(ErrorKind::Validation, "dislocation strength must be finite");
  return {Chart(dislocation_chart_spec(epsilon, tol.defect_core_radius), tol), DefectKind::Dislocation, "eps",
          epsilon};
}

DefectChart make_disclination(double omega, const Tolerances& tol) {
  if (!std::isfinite(omega)) throw Error(ErrorKind::Validation, "disclination angle must be finite");
  if (std::abs(omega) >= 0.5)
    throw Error(ErrorKind::Validation, "disclination is linearized in Om; |Om| must stay below 0.5");
  return {Chart(disclination_chart_spec(omega, tol.defect_core_radius), tol), DefectKind::Disclination, "Om",
          omega};
}

void LoopSpec::validate() const {
  if (vertices.size() < 3) throw Error(ErrorKind::Validation, "loop needs at least 3 vertices");
  const int D = static_cast<int>(vertices.front().size());
  for (const auto& v : vertices) {
    if (v.size() != D) throw Error(ErrorKind::DimensionMismatch, "loop vertices differ in dimension");
    if (!v.allFinite()) throw Error(ErrorKind::Validation, "loop vertex is not finite");
  }
  if ((vertices.front() - vertices.back()).lpNorm<Eigen::Infinity>() != 0.0)
    throw Error(ErrorKind::Validation, "loop must be closed (first vertex == last vertex)");
  if (samples_per_edge < 8) throw Error(ErrorKind::Validation, "samples_per_edge must be >= 8");
}

LoopSpec square_loop(const Coord& center, double half_width, int turns) {
  LoopSpec loop;
  const double c[4][2] = {{1, -1}, {1, 1}, {-1, 1}, {-1, -1}};
  for (int t = 0; t < turns; ++t)
    for (const auto& p : c) loop.vertices.push_back(center + half_width * Coord{{p[0], p[1]}});
  loop.vertices.push_back(loop.vertices.front());
  return loop;
}

double winding_number(const LoopSpec& loop, const Coord& center) {
  loop.validate();
  constexpr int kSub = 256;
  double total = 0;
  auto angle = [&](const Coord& p) { return std::atan2(p[1] - center[1], p[0] - center[0]); };
  double prev = angle(loop.vertices.front());
  for (std::size_t e = 0; e + 1 < loop.vertices.size(); ++e) {
    const Coord& a = loop.vertices[e];
    const Coord& b = loop.vertices[e + 1];
    for (int k = 1; k <= kSub; ++k) {
      double cur = angle(a + (b - a) * (static_cast<double>(k) / kSub));
      double d = cur - prev;
      d -= 2 * std::numbers::pi * std::round(d / (2 * std::numbers::pi));
      total += d;
      prev = cur;
    }
  }
  return total / (2 * std::numbers::pi);
}

Vec loop_integral(const std::function<Vec(const Coord&)>& covectors, int components, const LoopSpec& loop,
                  double guard_radius) {
  loop.validate();
  auto integrand = [&](const Coord& q) -> Vec {
    if (q.norm() < guard_radius)
      throw Error(ErrorKind::QuadratureDivergence, "loop passes inside the excluded core");
    return covectors(q);
  };
  Vec total = Vec::Zero(components);
  const int panels = std::max(1, loop.samples_per_edge / 8);
  for (std::size_t e = 0; e + 1 < loop.vertices.size(); ++e) {
    const Coord& a = loop.vertices[e];
    const Coord& b = loop.vertices[e + 1];
    // covectors returns w as a (components x D) block flattened row-major;
    // contract with the edge direction here.
    const Vec d = b - a;
    const int D = static_cast<int>(d.size());
    // closest approach of the straight edge to the core, independent of where samples land
    const double s_min = d.squaredNorm() > 0 ? std::clamp(-a.dot(d) / d.squaredNorm(), 0.0, 1.0) : 0.0;
    if ((a + s_min * d).norm() < guard_radius)
      throw Error(ErrorKind::QuadratureDivergence, "loop edge passes through the excluded core");
    auto contracted = [&](const Coord& q) -> Vec {
      Vec w = integrand(q);
      Vec out = Vec::Zero(components);
      for (int c = 0; c < components; ++c)
        for (int mu = 0; mu < D; ++mu) out[c] += w[c * D + mu] * d[mu];
      return out;
    };
    for (int p = 0; p < panels; ++p) {
      double s0 = static_cast<double>(p) / panels;
      double s1 = static_cast<double>(p + 1) / panels;
      Vec whole = panel(contracted, a, b, s0, s1);
      total += adaptive(contracted, a, b, s0, s1, whole, 0);
    }
  }
  return total;
}

VectorField angle_gradient_field() {
  return VectorField({"-q2/(q1^2 + q2^2)", "q1/(q1^2 + q2^2)"}, 2);
}

double winding_integral(const VectorField& gradient, const LoopSpec& loop, const Tolerances& tol) {
  const double guard = tol.quadrature_guard_factor * tol.defect_core_radius;
  return loop_integral([&](const Coord& q) { return gradient.value(q); }, 1, loop, guard)[0];
}

BurgersResult burgers_vector(const Chart& chart, const LoopSpec& loop) {
  const auto& tol = chart.tolerances();
  const double guard = tol.quadrature_guard_factor * tol.defect_core_radius;
  const int A = chart.ambient();
  const int D = chart.dim();
  auto w = [&](const Coord& q) -> Vec {
    if (!chart.admits(q))
      throw Error(ErrorKind::QuadratureDivergence, "loop leaves the chart domain");
    Mat e = chart.triad(q);
    Vec out(A * D);
    for (int i = 0; i < A; ++i)
      for (int mu = 0; mu < D; ++mu) out[i * D + mu] = e(i, mu);
    return out;
  };
  BurgersResult r;
  r.b = loop_integral(w, A, loop, guard);
  r.b_over_2pi = r.b / (2 * std::numbers::pi);
  if (D == 2) r.winding = winding_number(loop, Coord::Zero(2));
  return r;
}

BurgersResult burgers_vector(const DefectChart& defect, const LoopSpec& loop) {
  return burgers_vector(defect.chart, loop);
}

double frank_angle(const Chart& chart, const LoopSpec& loop) {
  if (chart.dim() != 2 || chart.ambient() != 2)
    throw Error(ErrorKind::DimensionMismatch, "Frank angle needs a planar 2-D chart");
  const auto& tol = chart.tolerances();
  const double guard = tol.quadrature_guard_factor * tol.defect_core_radius;
  auto w = [&](const Coord& q) -> Vec {
    if (!chart.admits(q))
      throw Error(ErrorKind::QuadratureDivergence, "loop leaves the chart domain");
    TriadJet jet = chart.triad_jet(q, 1);
    Vec out(2);
    for (int mu = 0; mu < 2; ++mu) out[mu] = 0.5 * (jet.de(mu, 1, 0) - jet.de(mu, 0, 1));
    return out;
  };
  return loop_integral(w, 1, loop, guard)[0];
}

double frank_angle(const DefectChart& defect, const LoopSpec& loop) {
  return frank_angle(defect.chart, loop);
}

Vec torsion_flux(const DefectChart& defect, const LoopSpec& loop) {
  Chart reference = defect.chart.with_parameters({{defect.parameter, 0.0}});
  return burgers_vector(defect.chart, loop).b - burgers_vector(reference, loop).b;
}

}  // namespace nonholo
