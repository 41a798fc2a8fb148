#include "nonholo/short_time.hpp"

#include <array>
#include <cmath>

#include "nonholo/curvature.hpp"
#include "nonholo/errors.hpp"

namespace nonholo {

std::string to_string(MeasureMode m) {
  switch (m) {
    case MeasureMode::NaiveDeWitt: return "naive";
    case MeasureMode::QEP: return "qep";
    case MeasureMode::QEPviaVeff: return "qep_veff";
  }
  return "unknown";
}

MeasureMode measure_from_string(const std::string& s) {
  if (s == "naive") return MeasureMode::NaiveDeWitt;
  if (s == "qep") return MeasureMode::QEP;
  if (s == "qep_veff") return MeasureMode::QEPviaVeff;
  throw Error(ErrorKind::Validation, "measure must be naive, qep or qep_veff, got '" + s + "'");
}

void ShortTimeConfig::validate() const {
  if (!(mass > 0) || !(hbar > 0) || !(epsilon > 0))
    throw Error(ErrorKind::Validation, "mass, hbar and epsilon must be positive");
}

ShortTimeExpansion short_time_expansion(const ConnectionBundle& geo) {
  if (geo.order < 2) throw Error(ErrorKind::Validation, "short-time expansion needs connection order 2");
  const int D = geo.dim();
  const Tensor3& G = geo.gamma;
  const Tensor4& dG = geo.dgamma;  // (s, l, k, m) = d_s Gamma_{l k}^m
  const Mat& g = geo.metric;

  Tensor3 Gs = Tensor3::uniform(D);  // Gamma_{(a b)}^c
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b)
      for (int c = 0; c < D; ++c) Gs(a, b, c) = 0.5 * (G(a, b, c) + G(b, a, c));

  ShortTimeExpansion ex;
  ex.g = g;
  ex.sqrt_g = std::sqrt(g.determinant());
  ex.cubic = lower_last(G, g);

  // C(t; l, n, k) = d_k Gamma_{l n}^t + Gamma_{l n}^d Gamma_{(k d)}^t
  Tensor4 C = Tensor4::uniform(D);
  for (int t = 0; t < D; ++t)
    for (int l = 0; l < D; ++l)
      for (int n = 0; n < D; ++n)
        for (int k = 0; k < D; ++k) {
          double v = dG(k, l, n, t);
          for (int d = 0; d < D; ++d) v += G(l, n, d) * Gs(k, d, t);
          C(t, l, n, k) = v;
        }

  ex.quartic = Tensor4::uniform(D);
  ex.midpoint_quartic = Tensor4::uniform(D);
  for (int m = 0; m < D; ++m)
    for (int n = 0; n < D; ++n)
      for (int l = 0; l < D; ++l)
        for (int k = 0; k < D; ++k) {
          double post = 0, mid = 0;
          for (int t = 0; t < D; ++t) {
            post += g(m, t) * C(t, l, n, k) / 3.0;
            mid += g(k, t) * C(t, m, n, l) / 12.0;
          }
          for (int s = 0; s < D; ++s) post += 0.25 * G(l, k, s) * ex.cubic(m, n, s);
          ex.quartic(m, n, l, k) = post;
          ex.midpoint_quartic(m, n, l, k) = mid;
        }

  ex.naive1 = Vec::Zero(D);
  ex.naive2 = Mat::Zero(D, D);
  for (int m = 0; m < D; ++m)
    for (int n = 0; n < D; ++n) {
      ex.naive1[m] -= G(m, n, n);
      for (int k = 0; k < D; ++k) ex.naive2(n, m) += 0.5 * dG(m, n, k, k);
    }
  ex.naive2 = 0.5 * (ex.naive2 + ex.naive2.transpose()).eval();

  // QEP: log det of d(dx)/d(dq) for the cubic postpoint map, divided by det e.
  ex.qep1 = Vec::Zero(D);
  ex.qep2 = Mat::Zero(D, D);
  for (int n = 0; n < D; ++n)
    for (int m = 0; m < D; ++m) ex.qep1[n] -= Gs(m, n, m);
  for (int n = 0; n < D; ++n)
    for (int s = 0; s < D; ++s) {
      double tr = 0;
      for (int m = 0; m < D; ++m) {
        tr += C(m, m, n, s) + C(m, m, s, n) + C(m, n, m, s) + C(m, n, s, m) + C(m, s, m, n) + C(m, s, n, m);
      }
      double sq = 0;
      for (int m = 0; m < D; ++m)
        for (int v = 0; v < D; ++v) sq += Gs(n, v, m) * Gs(s, m, v);
      ex.qep2(n, s) = 0.5 * tr / 6.0 - 0.5 * sq;
    }
  ex.qep2 = 0.5 * (ex.qep2 + ex.qep2.transpose()).eval();
  return ex;
}

double action_polynomial(const ShortTimeExpansion& ex, const Vec& dq) {
  const int D = static_cast<int>(dq.size());
  double a2 = dq.dot(ex.g * dq);
  double a3 = 0, a4 = 0;
  for (int m = 0; m < D; ++m)
    for (int n = 0; n < D; ++n) {
      const double mn = dq[m] * dq[n];
      for (int l = 0; l < D; ++l) {
        const double mnl = mn * dq[l];
        a3 += ex.cubic(m, n, l) * mnl;
        for (int k = 0; k < D; ++k) a4 += ex.quartic(m, n, l, k) * mnl * dq[k];
      }
    }
  return a2 - a3 + a4;
}

double midpoint_polynomial(const ShortTimeExpansion& ex, const Vec& dq) {
  const int D = static_cast<int>(dq.size());
  double a4 = 0;
  for (int m = 0; m < D; ++m)
    for (int n = 0; n < D; ++n)
      for (int l = 0; l < D; ++l)
        for (int k = 0; k < D; ++k) a4 += ex.midpoint_quartic(m, n, l, k) * dq[m] * dq[n] * dq[l] * dq[k];
  return dq.dot(ex.g * dq) + a4;
}

double naive_jacobian(const ShortTimeExpansion& ex, const Vec& dq) {
  return ex.naive1.dot(dq) + dq.dot(ex.naive2 * dq);
}

double qep_jacobian(const ShortTimeExpansion& ex, const Vec& dq) {
  return ex.qep1.dot(dq) + dq.dot(ex.qep2 * dq);
}

namespace {

ShortTimeExpansion expansion_at(const Chart& chart, const Coord& q, const Vec& dq) {
  if (dq.size() != chart.dim()) throw Error(ErrorKind::DimensionMismatch, "dq has wrong dimension");
  return short_time_expansion(connection_bundle(chart, q, 2));
}

}  // namespace

double postpoint_action(const Chart& chart, const Coord& q_post, const Vec& dq, const ShortTimeConfig& cfg) {
  cfg.validate();
  return cfg.mass / (2 * cfg.epsilon) * action_polynomial(expansion_at(chart, q_post, dq), dq);
}

double prepoint_action(const Chart& chart, const Coord& q_pre, const Vec& dq, const ShortTimeConfig& cfg) {
  cfg.validate();
  return cfg.mass / (2 * cfg.epsilon) * action_polynomial(expansion_at(chart, q_pre, dq), -dq);
}

double midpoint_action(const Chart& chart, const Coord& q_mid, const Vec& dq, const ShortTimeConfig& cfg) {
  cfg.validate();
  return cfg.mass / (2 * cfg.epsilon) * midpoint_polynomial(expansion_at(chart, q_mid, dq), dq);
}

double jacobian_action_naive(const Chart& chart, const Coord& q_post, const Vec& dq) {
  return naive_jacobian(expansion_at(chart, q_post, dq), dq);
}

double jacobian_action_qep(const Chart& chart, const Coord& q_post, const Vec& dq) {
  return qep_jacobian(expansion_at(chart, q_post, dq), dq);
}

double delta_jacobian(const Chart& chart, const Coord& q_post, const Vec& dq) {
  auto ex = expansion_at(chart, q_post, dq);
  return qep_jacobian(ex, dq) - naive_jacobian(ex, dq);
}

double effective_potential(const ConnectionBundle& geo, const ShortTimeConfig& cfg) {
  cfg.validate();
  auto s = ricci_scalar_einstein(riemann_curvature(geo), geo.metric, geo.inverse_metric);
  return -cfg.hbar * cfg.hbar * s.scalar / (6 * cfg.mass);
}

double effective_potential(const Chart& chart, const Coord& q, const ShortTimeConfig& cfg) {
  return effective_potential(connection_bundle(chart, q, 2), cfg);
}

}  // namespace nonholo
