#pragma once

#include "nonholo/connection.hpp"

namespace nonholo {

enum class TimeMode { RealTime, ImaginaryTime };
enum class MeasureMode { NaiveDeWitt, QEP, QEPviaVeff };

std::string to_string(MeasureMode m);
MeasureMode measure_from_string(const std::string& s);

struct ShortTimeConfig {
  double mass = 1.0;
  double hbar = 1.0;
  double epsilon = 0.01;
  TimeMode mode = TimeMode::ImaginaryTime;

  void validate() const;
};

/// Coefficients of the short-time expansions at one point, with
/// dq = q_post - q_pre:
///   (2 eps / M) A = g dq dq - cubic dq^3 + quartic dq^4
///   naive Jacobian exponent = naive1 . dq + dq . naive2 . dq
///   QEP Jacobian exponent   = qep1 . dq + dq . qep2 . dq
/// The midpoint form uses g and midpoint_quartic (no cubic term).
struct ShortTimeExpansion {
  Mat g;
  Tensor3 cubic;     // Gamma_{m n l} = Gamma_{m n}^t g_{t l}
  Tensor4 quartic;   // (m, n, l, k)
  Tensor4 midpoint_quartic;
  Vec naive1;
  Mat naive2;
  Vec qep1;
  Mat qep2;
  double sqrt_g = 0;
};

ShortTimeExpansion short_time_expansion(const ConnectionBundle& geo);

double action_polynomial(const ShortTimeExpansion& ex, const Vec& dq);  // (2 eps / M) A, postpoint
double midpoint_polynomial(const ShortTimeExpansion& ex, const Vec& dq);
double naive_jacobian(const ShortTimeExpansion& ex, const Vec& dq);
double qep_jacobian(const ShortTimeExpansion& ex, const Vec& dq);

// Postpoint action A(q, q - dq) through fourth order in dq.
double postpoint_action(const Chart& chart, const Coord& q_post, const Vec& dq, const ShortTimeConfig& cfg);
// Prepoint form: coefficients at q_pre and dq -> -dq.
double prepoint_action(const Chart& chart, const Coord& q_pre, const Vec& dq, const ShortTimeConfig& cfg);
// Midpoint action A(q_mid + dq/2, q_mid - dq/2).
double midpoint_action(const Chart& chart, const Coord& q_mid, const Vec& dq, const ShortTimeConfig& cfg);

// Dimensionless Jacobian exponents (i/hbar) A_J0 and (i/hbar) A_J.
double jacobian_action_naive(const Chart& chart, const Coord& q_post, const Vec& dq);
double jacobian_action_qep(const Chart& chart, const Coord& q_post, const Vec& dq);
double delta_jacobian(const Chart& chart, const Coord& q_post, const Vec& dq);

// V_eff = -hbar^2 Rb / (6 M), Rb the scalar of the Riemann curvature.
double effective_potential(const Chart& chart, const Coord& q, const ShortTimeConfig& cfg);
double effective_potential(const ConnectionBundle& geo, const ShortTimeConfig& cfg);

}  // namespace nonholo
