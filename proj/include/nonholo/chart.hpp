#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nonholo/expression.hpp"
#include "nonholo/tensor.hpp"
#include "nonholo/tolerances.hpp"

namespace nonholo {

enum class ChartKind {
  HolonomicMap,  // exprs are x^i(q); triads come from differentiation
  TriadField,    // exprs are e^i_mu(q), row-major, possibly nonintegrable
};

/// Declarative description of a chart, as read from a chart file.
///
/// `ambient` is the number of flat coordinates x^i. It defaults to `dim`;
/// embedded charts such as the 2-sphere in R^3 use ambient > dim, in which
/// case the reciprocal triad is the pseudo-inverse g^{mu nu} e^i_nu.
struct ChartSpec {
  std::string name;
  int dim = 0;
  int ambient = 0;
  ChartKind kind = ChartKind::HolonomicMap;
  std::vector<std::string> exprs;
  std::map<std::string, double> params;
  std::optional<std::string> guard;  // admitted iff guard(q) > 0

  bool operator==(const ChartSpec&) const = default;
};

/// Triad e^i_mu and its exact partial derivatives at one point.
struct TriadJet {
  int order = 0;
  Mat e;        // (i, mu)
  Tensor3 de;   // (lambda, i, mu) = d_lambda e^i_mu
  Tensor4 dde;  // (sigma, lambda, i, mu) = d_sigma d_lambda e^i_mu
};

/// Coordinate chart. Immutable after construction; every evaluation is a pure
/// function of the point.
class Chart {
 public:
  static constexpr int kMaxDim = 4;

  explicit Chart(ChartSpec spec, const Tolerances& tol = default_tolerances());

  int dim() const { return spec_.dim; }
  int ambient() const { return spec_.ambient; }
  ChartKind kind() const { return spec_.kind; }
  const ChartSpec& spec() const { return spec_; }
  const std::string& name() const { return spec_.name; }
  const Tolerances& tolerances() const { return tol_; }

  bool admits(const Coord& q) const;
  void require_admitted(const Coord& q) const;

  // All evaluators throw SingularPoint for rejected points and
  // DegenerateTriad when sqrt(det g) falls below the configured floor.
  Mat triad(const Coord& q) const;
  TriadJet triad_jet(const Coord& q, int order) const;
  Mat reciprocal_triad(const Coord& q) const;
  Mat metric(const Coord& q) const;
  double volume_element(const Coord& q) const;  // sqrt(det g)

  // Raw map values x^i(q); HolonomicMap only.
  Vec map_point(const Coord& q) const;

  // Same chart with every parameter replaced.
  Chart with_parameters(const std::map<std::string, double>& params) const;

 private:
  void check_triad(const Mat& e, const Coord& q) const;

  ChartSpec spec_;
  Tolerances tol_;
  std::vector<Expression> exprs_;
  std::optional<Expression> guard_;
};

// Built-in charts shipped with the library (also provided as data files).
ChartSpec cartesian_chart_spec(int dim);
ChartSpec polar_chart_spec();
ChartSpec sphere_chart_spec(double radius);
ChartSpec ring_chart_spec(double radius);
ChartSpec synthetic_torsion_chart_spec(double alpha);

}  // namespace nonholo
