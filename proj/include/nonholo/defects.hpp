#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nonholo/connection.hpp"

namespace nonholo {

enum class DefectKind { Dislocation, Disclination };

struct DefectChart {
  Chart chart;
  DefectKind kind;
  std::string parameter;  // "eps" or "Om"
  double value = 0;
};

// Dislocation: triad field e^1 = (1, 0), e^2 = (0, 1) + eps grad(phi), with
// grad(phi) = (-q2, q1)/|q|^2 the single-valued gradient of the polar angle.
ChartSpec dislocation_chart_spec(double epsilon, double core_radius = 1e-8);
// Disclination to first order in Om: x^mu = q^mu + Om eps^mu_nu q^nu phi(q),
// with phi = atan2(q2, q1) cut along the negative q1 axis.
ChartSpec disclination_chart_spec(double omega, double core_radius = 1e-8);

DefectChart make_dislocation(double epsilon, const Tolerances& tol = default_tolerances());
DefectChart make_disclination(double omega, const Tolerances& tol = default_tolerances());

/// Closed polygon in a 2-D chart. Edges are integrated with composite
/// 8-node Gauss-Legendre panels; `samples_per_edge` fixes the initial panel
/// count (samples/8) and panels are bisected until converged.
struct LoopSpec {
  std::vector<Coord> vertices;  // first == last
  int samples_per_edge = 8;

  void validate() const;
};

// Axis-aligned square centred at `center`, counter-clockwise, traversed `turns` times.
LoopSpec square_loop(const Coord& center, double half_width, int turns = 1);

// Number of times the loop winds around `center`, from continuously
// accumulated polar-angle increments along densely sampled edges.
double winding_number(const LoopSpec& loop, const Coord& center);

// Integral of `components` covector fields w^c_mu(q) dq^mu around the loop.
// `covectors` returns w flattened row-major as (c, mu). Samples closer than
// guard_radius to the origin raise QuadratureDivergence.
Vec loop_integral(const std::function<Vec(const Coord&)>& covectors, int components, const LoopSpec& loop,
                  double guard_radius);

// grad(phi) = (-q2, q1)/|q|^2
VectorField angle_gradient_field();

double winding_integral(const VectorField& gradient, const LoopSpec& loop,
                        const Tolerances& tol = default_tolerances());

struct BurgersResult {
  Vec b;           // raw closure failure, b^i = loop integral of e^i_mu dq^mu
  Vec b_over_2pi;  // b / (2 pi)
  double winding = 0;
};

BurgersResult burgers_vector(const Chart& chart, const LoopSpec& loop);
BurgersResult burgers_vector(const DefectChart& defect, const LoopSpec& loop);

// Loop integral of d omega with omega = (d_1 x^2 - d_2 x^1)/2 from the triad.
double frank_angle(const Chart& chart, const LoopSpec& loop);
double frank_angle(const DefectChart& defect, const LoopSpec& loop);

// Burgers integral of the defect chart minus that of the same chart with
// its defect parameter set to zero.
Vec torsion_flux(const DefectChart& defect, const LoopSpec& loop);

}  // namespace nonholo
