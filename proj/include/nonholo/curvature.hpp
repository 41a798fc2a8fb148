#pragma once

#include "nonholo/connection.hpp"

namespace nonholo {

// R_{m n l}^k stored as (m, n, l, k).
//   R = d_m G_{n l}^k - d_n G_{m l}^k - (G_{m l}^s G_{n s}^k - G_{n l}^s G_{m s}^k)
Tensor4 cartan_curvature(const ConnectionBundle& geo);
Tensor4 riemann_curvature(const ConnectionBundle& geo);
Tensor4 cartan_curvature(const Chart& chart, const Coord& q);
Tensor4 riemann_curvature(const Chart& chart, const Coord& q);

// max |R - (Rb + Db_m K_n - Db_n K_m - [K_m, K_n])| over all indices. The
// derivative of K is assembled from the torsion derivative and the metric,
// independently of the Christoffel route used for Rb.
double curvature_relation_check(const ConnectionBundle& geo);
double curvature_relation_check(const Chart& chart, const Coord& q);

enum class CurvatureSource { Cartan, Riemann };

struct CurvatureSummary {
  Mat ricci;     // R_{n l} = R_{m n l}^m
  double scalar = 0;
  Mat einstein;  // R_{n l} - g_{n l} R / 2
};

CurvatureSummary ricci_scalar_einstein(const Tensor4& curvature, const Mat& metric,
                                       const Mat& inverse_metric);
CurvatureSummary ricci_scalar_einstein(const Chart& chart, const Coord& q, CurvatureSource source);

struct CurvatureBundle {
  Tensor4 cartan;
  Tensor4 riemann;
  CurvatureSummary cartan_summary;
  CurvatureSummary riemann_summary;
};

CurvatureBundle curvature_bundle(const ConnectionBundle& geo);

// Max |R_{m n l}^k + R_{n m l}^k|.
double antisymmetry_residual(const Tensor4& r);

}  // namespace nonholo
