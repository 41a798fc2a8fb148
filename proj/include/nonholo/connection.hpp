#pragma once

#include <string>
#include <vector>

#include "nonholo/chart.hpp"

namespace nonholo {

/// Local geometry at one point. Index order follows the symbol:
///   gamma(l, k, m)       = Gamma_{l k}^m          = e_i^m d_l e^i_k
///   gamma_bar(l, n, m)   = Christoffel, second kind
///   gamma_bar_first(l, n, m) = Christoffel, first kind (all lower)
///   torsion(l, k, m)     = S_{l k}^m
///   contortion(m, n, l)  = K_{m n}^l;  contortion_lower(m, n, l) = K_{m n l}
///   dmetric(l, m, n)     = d_l g_{m n}
///   dgamma(s, l, k, m)   = d_s Gamma_{l k}^m      (order 2 only)
///   dgamma_bar(s, l, k, m) = d_s Gamma-bar_{l k}^m (order 2 only)
struct ConnectionBundle {
  Coord q;
  int order = 1;
  Mat triad;            // e^i_mu
  Mat reciprocal;       // e_i^mu, stored (mu, i)
  Mat metric;
  Mat inverse_metric;
  Tensor3 dmetric;
  Tensor3 gamma_bar_first;
  Tensor3 gamma_bar;
  Tensor3 gamma;
  Tensor3 torsion;
  Vec torsion_trace;    // S_mu = S_{mu l}^l
  Tensor3 contortion;
  Tensor3 contortion_lower;
  Tensor4 dmetric2;     // d_s d_l g_{m n}
  Tensor4 dgamma;
  Tensor4 dgamma_bar;

  int dim() const { return static_cast<int>(q.size()); }
};

// Evaluates everything above. order 1 gives connections; order 2 adds their
// first derivatives, which curvature and the short-time expansions need.
ConnectionBundle connection_bundle(const Chart& chart, const Coord& q, int order = 2);

struct Christoffel {
  Tensor3 first;   // Gamma-bar_{l n m}
  Tensor3 second;  // Gamma-bar_{l n}^m
};

Christoffel christoffel(const Chart& chart, const Coord& q);
Tensor3 affine_connection(const Chart& chart, const Coord& q);
Tensor3 torsion_tensor(const Chart& chart, const Coord& q);
Vec torsion_trace(const Chart& chart, const Coord& q);
Tensor3 contortion(const Chart& chart, const Coord& q);

/// Components v^mu(q) or v_mu(q) given as expressions in q1..qD.
class VectorField {
 public:
  VectorField(const std::vector<std::string>& components, int dim,
              const std::map<std::string, double>& params = {});

  int dim() const { return dim_; }
  Vec value(const Coord& q) const;
  Mat jacobian(const Coord& q) const;  // (mu, nu) = d_mu v^nu

 private:
  int dim_;
  std::vector<Expression> comps_;
};

enum class ConnectionVariant { Riemann, Affine };
enum class Variance { Upper, Lower };

// Returns (mu, nu) = D_mu v^nu (Upper) or D_mu v_nu (Lower).
Mat covariant_derivative(const Chart& chart, const Coord& q, const VectorField& field,
                         ConnectionVariant variant, Variance variance);
Mat covariant_derivative(const ConnectionBundle& geo, const Vec& v, const Mat& dv,
                         ConnectionVariant variant, Variance variance);

// Residual checks used by tests and the `tensors` command.
struct ConnectionResiduals {
  double christoffel_symmetry = 0;  // |Gb_{ln}^m - Gb_{nl}^m|
  double torsion_antisymmetry = 0;  // |S_{lk}^m + S_{kl}^m|
  double contortion_antisymmetry = 0;  // |K_{mnl} + K_{mln}|
  double decomposition = 0;          // |Gamma - (Gamma-bar + K)|
  double trace_identity = 0;         // |Gamma_{mn}^n - Gamma-bar_{mn}^n|
  double metricity = 0;              // |D_m g_{nl}| = |d_m g_{nl} - Gamma_{mnl} - Gamma_{mln}|
};

ConnectionResiduals connection_residuals(const ConnectionBundle& geo);

// Lowers the last index: T_{ab}^c g_{cd}.
Tensor3 lower_last(const Tensor3& t, const Mat& g);

}  // namespace nonholo
