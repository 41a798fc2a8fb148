#pragma once

#include <variant>
#include <vector>

#include "nonholo/short_time.hpp"

namespace nonholo {

struct RingManifold {
  double radius = 1.0;
  int points = 256;
};

// Gauss-Legendre latitudes (nodes in cos theta) times a uniform longitude grid.
struct SphereManifold {
  double radius = 1.0;
  int n_theta = 64;
  int n_phi = 128;
};

using Manifold = std::variant<RingManifold, SphereManifold>;

enum class Execution { Serial, Parallel };

/// Imaginary-time transfer matrix on a grid.
///
/// Ring: `kernel` is the dense P x P matrix. Sphere: the operator commutes
/// with rotations about the polar axis, so only the rows at longitude 0 are
/// stored: kernel(j, j' * n_phi + k) couples latitude j at phi = 0 to node
/// (j', k). Every other row is the same row shifted in longitude.
struct SlicedPropagator {
  Manifold manifold;
  ShortTimeConfig cfg;
  MeasureMode measure = MeasureMode::QEP;
  Mat kernel;
  std::vector<Coord> nodes;   // chart coordinates, row-major over (j, k) on the sphere
  std::vector<double> cell;   // physical area (length) of each node's cell
  double sigma = 0;           // sqrt(eps hbar / M)
  double max_hop = 0;         // largest nearest-neighbour spacing
  double cutoff = 0;          // physical cutoff radius actually used

  bool is_sphere() const { return std::holds_alternative<SphereManifold>(manifold); }
  int size() const { return static_cast<int>(nodes.size()); }

  // Full-operator matrix-vector product.
  Vec apply(const Vec& v, Execution exec = Execution::Parallel) const;
  // Full operator as a dense matrix. Intended for rings and small spheres.
  Mat dense() const;
};

SlicedPropagator build_propagator(const Manifold& manifold, const ShortTimeConfig& cfg, MeasureMode measure,
                                  const Tolerances& tol = default_tolerances(),
                                  Execution exec = Execution::Parallel);

// Dense product of two ring propagators on the same grid (one slice after the other).
Mat compose(const SlicedPropagator& later, const SlicedPropagator& earlier);

struct LevelGroup {
  double energy = 0;
  int degeneracy = 0;
};

struct SpectrumOptions {
  int n_levels = 7;
  std::vector<double> eps_ladder{0.08, 0.04, 0.02, 0.01};
  int richardson_order = 1;
  double degeneracy_tol = 0.02;  // in units of hbar^2 / (M r^2)
};

struct SpectrumResult {
  MeasureMode measure = MeasureMode::QEP;
  std::vector<double> eps;
  std::vector<std::vector<double>> levels;  // levels[i] at eps[i], ascending
  std::vector<double> extrapolated;         // eps -> 0
  std::vector<LevelGroup> groups;           // degeneracy grouping of `extrapolated`
};

// Lowest n energies E = -(hbar/eps) ln(lambda) of one propagator, ascending.
std::vector<double> kernel_levels(const SlicedPropagator& prop, int n_levels);

// Builds the propagator at each eps of the ladder and extrapolates every
// level to eps = 0 with a polynomial of the given order through the
// order + 1 smallest eps values.
SpectrumResult extract_spectrum(const Manifold& manifold, const ShortTimeConfig& cfg, MeasureMode measure,
                                const SpectrumOptions& opts, const Tolerances& tol = default_tolerances(),
                                Execution exec = Execution::Parallel);

std::vector<LevelGroup> group_levels(const std::vector<double>& energies, double tol);
double richardson(const std::vector<double>& eps, const std::vector<double>& values, int order);

// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace nonholo
