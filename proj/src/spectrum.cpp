#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "nonholo/errors.hpp"
#include "nonholo/propagator.hpp"

namespace nonholo {

namespace {

std::vector<double> top_eigenvalues_ring(const SlicedPropagator& p, int n) {
  Eigen::EigenSolver<Mat> es(p.kernel, false);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::EigenFailure, "eigen solve failed on ring kernel");
  std::vector<double> lam;
  for (int k = 0; k < es.eigenvalues().size(); ++k) lam.push_back(es.eigenvalues()[k].real());
  std::sort(lam.begin(), lam.end(), std::greater<>());
  lam.resize(std::min<std::size_t>(lam.size(), static_cast<std::size_t>(n)));
  return lam;
}

// The sphere operator commutes with longitude shifts, so it block-diagonalizes
// over Fourier modes exp(i m phi): B^m(j, j') = sum_k K[(j,0)][(j',k)] exp(i m phi_k).
std::vector<double> top_eigenvalues_sphere(const SlicedPropagator& p, const SphereManifold& s, int n) {
  const int nt = s.n_theta;
  const int np = s.n_phi;
  const int lmax = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  const int mmax = std::min(np / 2 - 1, lmax + 2);
  std::vector<double> lam;
  for (int m = -mmax; m <= mmax; ++m) {
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(nt, nt);
    for (int k = 0; k < np; ++k) {
      const double ang = 2 * std::numbers::pi * m * k / np;
      const std::complex<double> ph(std::cos(ang), std::sin(ang));
      for (int j = 0; j < nt; ++j)
        for (int jp = 0; jp < nt; ++jp) B(j, jp) += p.kernel(j, jp * np + k) * ph;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(B, false);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::EigenFailure, "eigen solve failed on a Fourier block");
    for (int k = 0; k < nt; ++k) lam.push_back(es.eigenvalues()[k].real());
  }
  std::sort(lam.begin(), lam.end(), std::greater<>());
  lam.resize(std::min<std::size_t>(lam.size(), static_cast<std::size_t>(n)));
  return lam;
}

double energy_unit(const Manifold& m, const ShortTimeConfig& cfg) {
  const double r = std::visit([](const auto& x) { return x.radius; }, m);
  return cfg.hbar * cfg.hbar / (cfg.mass * r * r);
}

}  // namespace

std::vector<double> kernel_levels(const SlicedPropagator& prop, int n_levels) {
  if (n_levels < 1 || n_levels > prop.size()) throw Error(ErrorKind::Validation, "n_levels out of range");
  std::vector<double> lam = prop.is_sphere()
                                ? top_eigenvalues_sphere(prop, std::get<SphereManifold>(prop.manifold), n_levels)
                                : top_eigenvalues_ring(prop, n_levels);
  std::vector<double> e;
  for (double l : lam) {
    if (!(l > 0)) throw Error(ErrorKind::EigenFailure, "leading kernel eigenvalue is not positive");
    e.push_back(-prop.cfg.hbar / prop.cfg.epsilon * std::log(l));
  }
  std::sort(e.begin(), e.end());
  return e;
}

double richardson(const std::vector<double>& eps, const std::vector<double>& values, int order) {
  if (eps.size() != values.size() || order < 0 || static_cast<int>(eps.size()) < order + 1)
    throw Error(ErrorKind::Validation, "Richardson extrapolation needs order + 1 samples");
  std::vector<std::size_t> idx(eps.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return eps[a] < eps[b]; });
  idx.resize(static_cast<std::size_t>(order) + 1);
  // Lagrange interpolation evaluated at eps = 0.
  double out = 0;
  for (std::size_t a : idx) {
    double w = 1;
    for (std::size_t b : idx)
      if (b != a) w *= eps[b] / (eps[b] - eps[a]);
    out += w * values[a];
  }
  return out;
}

std::vector<LevelGroup> group_levels(const std::vector<double>& energies, double tol) {
  std::vector<LevelGroup> groups;
  for (double e : energies) {
    if (!groups.empty() && std::abs(e - groups.back().energy) <= tol) {
      auto& g = groups.back();
      g.energy = (g.energy * g.degeneracy + e) / (g.degeneracy + 1);
      ++g.degeneracy;
    } else {
      groups.push_back({e, 1});
    }
  }
  return groups;
}

SpectrumResult extract_spectrum(const Manifold& manifold, const ShortTimeConfig& cfg, MeasureMode measure,
                                const SpectrumOptions& opts, const Tolerances& tol, Execution exec) {
  if (opts.eps_ladder.empty()) throw Error(ErrorKind::Validation, "eps ladder is empty");
  for (double e : opts.eps_ladder)
    if (!(e > 0)) throw Error(ErrorKind::Validation, "eps ladder entries must be positive");
  SpectrumResult out;
  out.measure = measure;
  out.eps = opts.eps_ladder;
  for (double e : opts.eps_ladder) {
    ShortTimeConfig c = cfg;
    c.epsilon = e;
    out.levels.push_back(kernel_levels(build_propagator(manifold, c, measure, tol, exec), opts.n_levels));
  }
  for (int k = 0; k < opts.n_levels; ++k) {
    std::vector<double> v;
    for (const auto& lv : out.levels) v.push_back(lv[k]);
    out.extrapolated.push_back(richardson(out.eps, v, opts.richardson_order));
  }
  out.groups = group_levels(out.extrapolated, opts.degeneracy_tol * energy_unit(manifold, cfg));
  return out;
}

}  // namespace nonholo
