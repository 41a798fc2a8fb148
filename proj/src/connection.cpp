#include "nonholo/connection.hpp"

#include <algorithm>
#include <cmath>

#include "nonholo/errors.hpp"

namespace nonholo {

namespace {

template <int N>
Mat field_jacobian(const std::vector<Expression>& comps, const Coord& q) {
  using D = Dual<double, N>;
  std::array<D, N> vars;
  for (int k = 0; k < N; ++k) vars[k] = Seed<D>::variable(q[k], k);
  Mat out(N, comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c) {
    D v = comps[c].evaluate<D>(std::span<const D>(vars.data(), N));
    for (int mu = 0; mu < N; ++mu) out(mu, c) = v.d[mu];
  }
  return out;
}

}  // namespace

Tensor3 lower_last(const Tensor3& t, const Mat& g) {
  Tensor3 out(t.extents());
  int a_n = t.extent(0), b_n = t.extent(1), n = t.extent(2);
  for (int a = 0; a < a_n; ++a)
    for (int b = 0; b < b_n; ++b)
      for (int d = 0; d < n; ++d) {
        double s = 0;
        for (int c = 0; c < n; ++c) s += t(a, b, c) * g(c, d);
        out(a, b, d) = s;
      }
  return out;
}

ConnectionBundle connection_bundle(const Chart& chart, const Coord& q, int order) {
  if (order < 1 || order > 2) throw Error(ErrorKind::Validation, "connection order must be 1 or 2");
  const TriadJet jet = chart.triad_jet(q, order);
  const int D = chart.dim();
  const int A = chart.ambient();
  const Mat& e = jet.e;

  ConnectionBundle b;
  b.q = q;
  b.order = order;
  b.triad = e;
  b.metric = e.transpose() * e;
  b.inverse_metric = b.metric.inverse();
  const Mat& g = b.metric;
  const Mat& gi = b.inverse_metric;
  b.reciprocal = gi * e.transpose();
  const Mat& E = b.reciprocal;

  b.dmetric = Tensor3::uniform(D);
  for (int l = 0; l < D; ++l)
    for (int m = 0; m < D; ++m)
      for (int n = 0; n < D; ++n) {
        double s = 0;
        for (int i = 0; i < A; ++i) s += jet.de(l, i, m) * e(i, n) + e(i, m) * jet.de(l, i, n);
        b.dmetric(l, m, n) = s;
      }

  b.gamma = Tensor3::uniform(D);
  for (int l = 0; l < D; ++l)
    for (int k = 0; k < D; ++k)
      for (int m = 0; m < D; ++m) {
        double s = 0;
        for (int i = 0; i < A; ++i) s += E(m, i) * jet.de(l, i, k);
        b.gamma(l, k, m) = s;
      }

  b.gamma_bar_first = Tensor3::uniform(D);
  for (int l = 0; l < D; ++l)
    for (int n = 0; n < D; ++n)
      for (int m = 0; m < D; ++m)
        b.gamma_bar_first(l, n, m) =
            0.5 * (b.dmetric(l, n, m) + b.dmetric(n, l, m) - b.dmetric(m, l, n));

  b.gamma_bar = Tensor3::uniform(D);
  for (int l = 0; l < D; ++l)
    for (int n = 0; n < D; ++n)
      for (int m = 0; m < D; ++m) {
        double s = 0;
        for (int a = 0; a < D; ++a) s += gi(m, a) * b.gamma_bar_first(l, n, a);
        b.gamma_bar(l, n, m) = s;
      }

  b.torsion = Tensor3::uniform(D);
  b.torsion_trace = Vec::Zero(D);
  for (int l = 0; l < D; ++l)
    for (int k = 0; k < D; ++k)
      for (int m = 0; m < D; ++m) b.torsion(l, k, m) = 0.5 * (b.gamma(l, k, m) - b.gamma(k, l, m));
  for (int m = 0; m < D; ++m)
    for (int l = 0; l < D; ++l) b.torsion_trace[m] += b.torsion(m, l, l);

  const Tensor3 s_low = lower_last(b.torsion, g);
  b.contortion_lower = Tensor3::uniform(D);
  for (int m = 0; m < D; ++m)
    for (int n = 0; n < D; ++n)
      for (int l = 0; l < D; ++l)
        b.contortion_lower(m, n, l) = s_low(m, n, l) - s_low(n, l, m) + s_low(l, m, n);
  b.contortion = Tensor3::uniform(D);
  for (int m = 0; m < D; ++m)
    for (int n = 0; n < D; ++n)
      for (int l = 0; l < D; ++l) {
        double s = 0;
        for (int a = 0; a < D; ++a) s += gi(l, a) * b.contortion_lower(m, n, a);
        b.contortion(m, n, l) = s;
      }

  if (order < 2) return b;

  b.dmetric2 = Tensor4::uniform(D);
  for (int s = 0; s < D; ++s)
    for (int l = 0; l < D; ++l)
      for (int m = 0; m < D; ++m)
        for (int n = 0; n < D; ++n) {
          double v = 0;
          for (int i = 0; i < A; ++i)
            v += jet.dde(s, l, i, m) * e(i, n) + jet.de(l, i, m) * jet.de(s, i, n) +
                 jet.de(s, i, m) * jet.de(l, i, n) + e(i, m) * jet.dde(s, l, i, n);
          b.dmetric2(s, l, m, n) = v;
        }

  // d_s g^{mn} = -g^{ma} d_s g_{ab} g^{bn}
  std::vector<Mat> dgi(D);
  std::vector<Mat> dE(D);
  for (int s = 0; s < D; ++s) {
    Mat dg(D, D);
    for (int a = 0; a < D; ++a)
      for (int c = 0; c < D; ++c) dg(a, c) = b.dmetric(s, a, c);
    dgi[s] = -gi * dg * gi;
    Mat de_s(A, D);
    for (int i = 0; i < A; ++i)
      for (int n = 0; n < D; ++n) de_s(i, n) = jet.de(s, i, n);
    dE[s] = dgi[s] * e.transpose() + gi * de_s.transpose();
  }

  b.dgamma = Tensor4::uniform(D);
  for (int s = 0; s < D; ++s)
    for (int l = 0; l < D; ++l)
      for (int k = 0; k < D; ++k)
        for (int m = 0; m < D; ++m) {
          double v = 0;
          for (int i = 0; i < A; ++i) v += dE[s](m, i) * jet.de(l, i, k) + E(m, i) * jet.dde(s, l, i, k);
          b.dgamma(s, l, k, m) = v;
        }

  b.dgamma_bar = Tensor4::uniform(D);
  for (int s = 0; s < D; ++s)
    for (int l = 0; l < D; ++l)
      for (int n = 0; n < D; ++n)
        for (int m = 0; m < D; ++m) {
          double v = 0;
          for (int a = 0; a < D; ++a) {
            double dfirst = 0.5 * (b.dmetric2(s, l, n, a) + b.dmetric2(s, n, l, a) -
                                   b.dmetric2(s, a, l, n));
            v += dgi[s](m, a) * b.gamma_bar_first(l, n, a) + gi(m, a) * dfirst;
          }
          b.dgamma_bar(s, l, n, m) = v;
        }
  return b;
}

Christoffel christoffel(const Chart& chart, const Coord& q) {
  auto b = connection_bundle(chart, q, 1);
  return {b.gamma_bar_first, b.gamma_bar};
}

Tensor3 affine_connection(const Chart& chart, const Coord& q) {
  return connection_bundle(chart, q, 1).gamma;
}

Tensor3 torsion_tensor(const Chart& chart, const Coord& q) {
  return connection_bundle(chart, q, 1).torsion;
}

Vec torsion_trace(const Chart& chart, const Coord& q) {
  return connection_bundle(chart, q, 1).torsion_trace;
}

Tensor3 contortion(const Chart& chart, const Coord& q) {
  return connection_bundle(chart, q, 1).contortion;
}

VectorField::VectorField(const std::vector<std::string>& components, int dim,
                         const std::map<std::string, double>& params)
    : dim_(dim) {
  if (dim < 1 || dim > Chart::kMaxDim) throw Error(ErrorKind::DimensionMismatch, "field dim out of range");
  if (static_cast<int>(components.size()) != dim)
    throw Error(ErrorKind::DimensionMismatch, "vector field needs " + std::to_string(dim) +
                                                  " components, got " +
                                                  std::to_string(components.size()));
  auto symbols = SymbolTable::coordinates(dim, params);
  for (const auto& c : components) comps_.push_back(Expression::parse(c, symbols));
}

Vec VectorField::value(const Coord& q) const {
  Vec v(dim_);
  for (int k = 0; k < dim_; ++k) v[k] = comps_[k](std::span<const double>(q.data(), q.size()));
  return v;
}

Mat VectorField::jacobian(const Coord& q) const {
  switch (dim_) {
    case 1: return field_jacobian<1>(comps_, q);
    case 2: return field_jacobian<2>(comps_, q);
    case 3: return field_jacobian<3>(comps_, q);
    default: return field_jacobian<4>(comps_, q);
  }
}

Mat covariant_derivative(const ConnectionBundle& geo, const Vec& v, const Mat& dv,
                         ConnectionVariant variant, Variance variance) {
  const int D = geo.dim();
  const Tensor3& c = variant == ConnectionVariant::Riemann ? geo.gamma_bar : geo.gamma;
  Mat out = dv;
  for (int mu = 0; mu < D; ++mu)
    for (int nu = 0; nu < D; ++nu) {
      double s = 0;
      for (int l = 0; l < D; ++l)
        s += variance == Variance::Upper ? c(mu, l, nu) * v[l] : -c(mu, nu, l) * v[l];
      out(mu, nu) += s;
    }
  return out;
}

Mat covariant_derivative(const Chart& chart, const Coord& q, const VectorField& field,
                         ConnectionVariant variant, Variance variance) {
  if (field.dim() != chart.dim())
    throw Error(ErrorKind::DimensionMismatch, "field and chart dimensions differ");
  auto geo = connection_bundle(chart, q, 1);
  return covariant_derivative(geo, field.value(q), field.jacobian(q), variant, variance);
}

ConnectionResiduals connection_residuals(const ConnectionBundle& b) {
  const int D = b.dim();
  ConnectionResiduals r;
  auto upd = [](double& slot, double v) { slot = std::max(slot, std::abs(v)); };
  for (int a = 0; a < D; ++a)
    for (int c = 0; c < D; ++c)
      for (int d = 0; d < D; ++d) {
        upd(r.christoffel_symmetry, b.gamma_bar(a, c, d) - b.gamma_bar(c, a, d));
        upd(r.torsion_antisymmetry, b.torsion(a, c, d) + b.torsion(c, a, d));
        upd(r.contortion_antisymmetry, b.contortion_lower(a, c, d) + b.contortion_lower(a, d, c));
        upd(r.decomposition, b.gamma(a, c, d) - b.gamma_bar(a, c, d) - b.contortion(a, c, d));
        double dg = b.dmetric(a, c, d);
        for (int k = 0; k < D; ++k)
          dg -= b.gamma(a, c, k) * b.metric(k, d) + b.gamma(a, d, k) * b.metric(c, k);
        upd(r.metricity, dg);
      }
  for (int m = 0; m < D; ++m) {
    double t = 0, tb = 0;
    for (int n = 0; n < D; ++n) {
      t += b.gamma(m, n, n);
      tb += b.gamma_bar(m, n, n);
    }
    upd(r.trace_identity, t - tb);
  }
  return r;
}

}  // namespace nonholo
