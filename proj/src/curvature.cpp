#include "nonholo/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "nonholo/errors.hpp"

namespace nonholo {

namespace {

Tensor4 curl(const Tensor3& c, const Tensor4& dc) {
  const int D = c.extent(0);
  Tensor4 r = Tensor4::uniform(D);
  for (int m = 0; m < D; ++m)
    for (int n = 0; n < D; ++n)
      for (int l = 0; l < D; ++l)
        for (int k = 0; k < D; ++k) {
          double v = dc(m, n, l, k) - dc(n, m, l, k);
          for (int s = 0; s < D; ++s) v -= c(m, l, s) * c(n, s, k) - c(n, l, s) * c(m, s, k);
          r(m, n, l, k) = v;
        }
  return r;
}

void require_order2(const ConnectionBundle& geo) {
  if (geo.order < 2)
    throw Error(ErrorKind::Validation, "curvature needs a connection bundle of order 2");
}

}  // namespace

Tensor4 cartan_curvature(const ConnectionBundle& geo) {
  require_order2(geo);
  return curl(geo.gamma, geo.dgamma);
}

Tensor4 riemann_curvature(const ConnectionBundle& geo) {
  require_order2(geo);
  return curl(geo.gamma_bar, geo.dgamma_bar);
}

Tensor4 cartan_curvature(const Chart& chart, const Coord& q) {
  return cartan_curvature(connection_bundle(chart, q, 2));
}

Tensor4 riemann_curvature(const Chart& chart, const Coord& q) {
  return riemann_curvature(connection_bundle(chart, q, 2));
}

double curvature_relation_check(const ConnectionBundle& geo) {
  require_order2(geo);
  const int D = geo.dim();
  const Mat& g = geo.metric;
  const Mat& gi = geo.inverse_metric;
  const Tensor3& K = geo.contortion;
  const Tensor3& Gb = geo.gamma_bar;

  // d_s S_{l k}^m and d_s S_{l k n} (lowered)
  Tensor4 dS = Tensor4::uniform(D);
  for (int s = 0; s < D; ++s)
    for (int l = 0; l < D; ++l)
      for (int k = 0; k < D; ++k)
        for (int m = 0; m < D; ++m)
          dS(s, l, k, m) = 0.5 * (geo.dgamma(s, l, k, m) - geo.dgamma(s, k, l, m));
  Tensor4 dSl = Tensor4::uniform(D);
  for (int s = 0; s < D; ++s)
    for (int l = 0; l < D; ++l)
      for (int k = 0; k < D; ++k)
        for (int n = 0; n < D; ++n) {
          double v = 0;
          for (int m = 0; m < D; ++m) v += dS(s, l, k, m) * g(m, n) + geo.torsion(l, k, m) * geo.dmetric(s, m, n);
          dSl(s, l, k, n) = v;
        }
  // d_s K_{m n l} lowered, then raised: d_s K_{m n}^l
  Tensor4 dKl = Tensor4::uniform(D);
  for (int s = 0; s < D; ++s)
    for (int m = 0; m < D; ++m)
      for (int n = 0; n < D; ++n)
        for (int l = 0; l < D; ++l)
          dKl(s, m, n, l) = dSl(s, m, n, l) - dSl(s, n, l, m) + dSl(s, l, m, n);
  std::vector<Mat> dgi(D);
  for (int s = 0; s < D; ++s) {
    Mat dg(D, D);
    for (int a = 0; a < D; ++a)
      for (int c = 0; c < D; ++c) dg(a, c) = geo.dmetric(s, a, c);
    dgi[s] = -gi * dg * gi;
  }
  Tensor4 dK = Tensor4::uniform(D);
  for (int s = 0; s < D; ++s)
    for (int m = 0; m < D; ++m)
      for (int n = 0; n < D; ++n)
        for (int l = 0; l < D; ++l) {
          double v = 0;
          for (int a = 0; a < D; ++a)
            v += dgi[s](l, a) * geo.contortion_lower(m, n, a) + gi(l, a) * dKl(s, m, n, a);
          dK(s, m, n, l) = v;
        }

  // Db_m K_{n l}^k
  Tensor4 DK = Tensor4::uniform(D);
  for (int m = 0; m < D; ++m)
    for (int n = 0; n < D; ++n)
      for (int l = 0; l < D; ++l)
        for (int k = 0; k < D; ++k) {
          double v = dK(m, n, l, k);
          for (int s = 0; s < D; ++s)
            v += -Gb(m, n, s) * K(s, l, k) - Gb(m, l, s) * K(n, s, k) + Gb(m, s, k) * K(n, l, s);
          DK(m, n, l, k) = v;
        }

  const Tensor4 R = cartan_curvature(geo);
  const Tensor4 Rb = riemann_curvature(geo);
  double worst = 0;
  for (int m = 0; m < D; ++m)
    for (int n = 0; n < D; ++n)
      for (int l = 0; l < D; ++l)
        for (int k = 0; k < D; ++k) {
          double rhs = Rb(m, n, l, k) + DK(m, n, l, k) - DK(n, m, l, k);
          for (int s = 0; s < D; ++s) rhs -= K(m, l, s) * K(n, s, k) - K(n, l, s) * K(m, s, k);
          worst = std::max(worst, std::abs(R(m, n, l, k) - rhs));
        }
  return worst;
}

double curvature_relation_check(const Chart& chart, const Coord& q) {
  return curvature_relation_check(connection_bundle(chart, q, 2));
}

CurvatureSummary ricci_scalar_einstein(const Tensor4& r, const Mat& metric, const Mat& inverse_metric) {
  const int D = r.extent(0);
  CurvatureSummary out;
  out.ricci = Mat::Zero(D, D);
  for (int n = 0; n < D; ++n)
    for (int l = 0; l < D; ++l)
      for (int m = 0; m < D; ++m) out.ricci(n, l) += r(m, n, l, m);
  out.scalar = (inverse_metric.array() * out.ricci.transpose().array()).sum();
  out.einstein = out.ricci - 0.5 * metric * out.scalar;
  return out;
}

CurvatureSummary ricci_scalar_einstein(const Chart& chart, const Coord& q, CurvatureSource source) {
  auto geo = connection_bundle(chart, q, 2);
  const Tensor4 r = source == CurvatureSource::Cartan ? cartan_curvature(geo) : riemann_curvature(geo);
  return ricci_scalar_einstein(r, geo.metric, geo.inverse_metric);
}

CurvatureBundle curvature_bundle(const ConnectionBundle& geo) {
  CurvatureBundle b;
  b.cartan = cartan_curvature(geo);
  b.riemann = riemann_curvature(geo);
  b.cartan_summary = ricci_scalar_einstein(b.cartan, geo.metric, geo.inverse_metric);
  b.riemann_summary = ricci_scalar_einstein(b.riemann, geo.metric, geo.inverse_metric);
  return b;
}

double antisymmetry_residual(const Tensor4& r) {
  const int D = r.extent(0);
  double worst = 0;
  for (int m = 0; m < D; ++m)
    for (int n = 0; n < D; ++n)
      for (int l = 0; l < D; ++l)
        for (int k = 0; k < D; ++k) worst = std::max(worst, std::abs(r(m, n, l, k) + r(n, m, l, k)));
  return worst;
}

}  // namespace nonholo
