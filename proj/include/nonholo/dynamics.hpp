#pragma once

#include <string>
#include <vector>

#include "nonholo/connection.hpp"

namespace nonholo {

struct TrajectoryState {
  double t = 0;
  Coord q;
  Vec qdot;
};

struct Trajectory {
  std::vector<TrajectoryState> states;
  bool truncated = false;        // stopped early at a rejected point
  std::string truncation_reason;
};

struct TimeSpan {
  double t0 = 0;
  double t1 = 1;
};

// Fixed-step classical RK4 on q'' + C_{l n}^m q'^l q'^n = 0, with C the
// Christoffel symbols (geodesic) or the full affine connection (autoparallel).
// A SingularPoint or DegenerateTriad during the run truncates the trajectory.
Trajectory integrate_geodesic(const Chart& chart, const Coord& q0, const Vec& qdot0, TimeSpan span,
                              double step);
Trajectory integrate_autoparallel(const Chart& chart, const Coord& q0, const Vec& qdot0,
                                  TimeSpan span, double step);

// (1/2) M g q' q'
double kinetic_energy(const Chart& chart, const TrajectoryState& s, double mass = 1.0);

/// Holonomic variation dq(t): D expressions in `t`, with `ta` and `tb` bound
/// to the run's end times.
class VariationExpr {
 public:
  VariationExpr(std::vector<std::string> components, std::map<std::string, double> params = {});

  int dim() const { return static_cast<int>(sources_.size()); }
  const std::vector<std::string>& sources() const { return sources_; }
  Vec operator()(double t, double ta, double tb) const;

 private:
  std::vector<std::string> sources_;
  std::map<std::string, double> params_;
  std::vector<Expression> exprs_;
};

struct VariationRun {
  std::vector<double> t;
  std::vector<Vec> deltaq;
  std::vector<Mat> G;      // G^m_l = Gamma_{l n}^m q'^n
  std::vector<Mat> Sigma;  // Sigma^m_n = 2 S_{l n}^m q'^l
  std::vector<Vec> deltab;
};

// Solves d/dt db = -G db + Sigma dq with db(t0) = 0. Each step applies the
// exponential of the averaged G (a per-step Magnus factor) and integrates the
// source by the trapezoidal rule, so the scheme is second order in the step.
std::vector<Vec> solve_variation_ode(const std::vector<double>& t, const std::vector<Mat>& G,
                                     const std::vector<Mat>& Sigma, const std::vector<Vec>& deltaq);

VariationRun nonholonomic_variation(const Chart& chart, const Trajectory& base, const VariationExpr& deltaq,
                                    const Tolerances& tol = default_tolerances());

// E-L residual with the torsion force along an evenly sampled trajectory:
//   dL/dq_l - d/dt dL/dq'^l - 2 S_{l m}^n q'^m dL/dq'^n,   L = (M/2) g q' q'.
// Velocities and accelerations come from 5-point central differences of q,
// so the first and last two samples carry no residual.
struct ResidualSample {
  double t = 0;
  Vec residual;
};
std::vector<ResidualSample> torsion_el_residual(const Chart& chart, const Trajectory& traj,
                                                double mass = 1.0);
double max_residual(const std::vector<ResidualSample>& r);

// 2 S_{m n}^l q'^m dq^n: the predicted failure of d/dt and the variation to commute.
Vec commutation_defect(const Chart& chart, const Coord& q, const Vec& qdot, const Vec& deltaq);

}  // namespace nonholo
