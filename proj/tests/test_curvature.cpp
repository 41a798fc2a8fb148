#include <doctest.h>

#include <cmath>

#include "nonholo/connection.hpp"
#include "nonholo/curvature.hpp"
#include "nonholo/defects.hpp"
#include "oracles.hpp"

using namespace nonholo;

TEST_CASE("flat charts have vanishing curvature") {
  for (const auto& spec : {cartesian_chart_spec(2), polar_chart_spec(), synthetic_torsion_chart_spec(0.4),
                           disclination_chart_spec(0.05)}) {
    Chart chart(spec);
    for (const auto& q : oracle::random_points(chart, Vec{{0.3, 0.2}}, Vec{{2.0, 1.5}}, 20, 13)) {
      auto geo = connection_bundle(chart, q, 2);
      auto cb = curvature_bundle(geo);
      INFO(spec.name);
      CHECK(cb.cartan.max_abs() < 1e-8);
      CHECK(cb.riemann.max_abs() < 1e-8);
      CHECK(std::abs(cb.riemann_summary.scalar) < 1e-8);
      CHECK(max_abs(cb.riemann_summary.einstein) < 1e-8);
    }
  }
}

TEST_CASE("sphere curvature: sign, scalar, homogeneity") {
  for (double r : {0.5, 1.0, 2.5}) {
    Chart sph(sphere_chart_spec(r));
    for (const auto& q : oracle::random_points(sph, Vec{{0.2, -3.0}}, Vec{{2.9, 3.0}}, 20, 17)) {
      auto geo = connection_bundle(sph, q, 2);
      auto cb = curvature_bundle(geo);
      // R_{theta phi theta}^phi under the implemented convention
      CHECK(cb.riemann(0, 1, 0, 1) == doctest::Approx(-1.0).epsilon(1e-10));
      CHECK(cb.riemann_summary.scalar * r * r == doctest::Approx(2.0).epsilon(1e-10));
      // Cartan equals Riemann since the embedding is torsion-free
      CHECK(max_abs_diff(cb.cartan, cb.riemann) < 1e-10);
      CHECK(max_abs(cb.riemann_summary.einstein) < 1e-8);
      // Ricci against the closed form
      oracle::SphereClosedForm sc{r};
      CHECK(max_abs(cb.riemann_summary.ricci - sc.ricci(q)) < 1e-10);
    }
  }
}

TEST_CASE("curvature against finite-difference curl of the connection") {
  struct Item {
    ChartSpec spec;
    Vec lo, hi;
  };
  for (const auto& it : {Item{sphere_chart_spec(1.2), Vec{{0.4, -2.0}}, Vec{{2.7, 2.0}}},
                         Item{synthetic_torsion_chart_spec(0.3), Vec{{-1.0, -1.0}}, Vec{{1.0, 1.0}}},
                         Item{dislocation_chart_spec(0.2), Vec{{0.5, 0.5}}, Vec{{1.5, 1.5}}}}) {
    Chart chart(it.spec);
    for (const auto& q : oracle::random_points(chart, it.lo, it.hi, 10, 19)) {
      auto geo = connection_bundle(chart, q, 2);
      const Tensor4 Rc = cartan_curvature(geo);
      const Tensor4 Rr = riemann_curvature(geo);
      auto gamma = [&](const Coord& p) { return connection_bundle(chart, p, 1).gamma; };
      auto gamma_bar = [&](const Coord& p) { return connection_bundle(chart, p, 1).gamma_bar; };
      CHECK(max_abs_diff(Rc, oracle::curvature(gamma, q)) < 1e-7);
      CHECK(max_abs_diff(Rr, oracle::curvature(gamma_bar, q)) < 1e-7);
    }
  }
}

TEST_CASE("antisymmetry and curvature relation") {
  for (const auto& spec : {sphere_chart_spec(1.0), synthetic_torsion_chart_spec(0.5), dislocation_chart_spec(0.1),
                           polar_chart_spec()}) {
    Chart chart(spec);
    for (const auto& q : oracle::random_points(chart, Vec{{0.4, 0.3}}, Vec{{2.0, 2.0}}, 20, 23)) {
      auto geo = connection_bundle(chart, q, 2);
      INFO(spec.name);
      CHECK(antisymmetry_residual(cartan_curvature(geo)) < 1e-14);
      CHECK(antisymmetry_residual(riemann_curvature(geo)) < 1e-14);
      CHECK(curvature_relation_check(geo) < 1e-8);
    }
  }
}

TEST_CASE("ricci, scalar and einstein from either source") {
  Chart sph(sphere_chart_spec(1.5));
  const Coord q{{1.1, 0.2}};
  auto a = ricci_scalar_einstein(sph, q, CurvatureSource::Riemann);
  auto b = ricci_scalar_einstein(sph, q, CurvatureSource::Cartan);
  CHECK(a.scalar == doctest::Approx(2 / (1.5 * 1.5)));
  CHECK(b.scalar == doctest::Approx(a.scalar));
  Chart cart(cartesian_chart_spec(3));
  auto f = ricci_scalar_einstein(cart, Coord{{0.1, 0.2, 0.3}}, CurvatureSource::Riemann);
  CHECK(f.scalar == 0.0);
  CHECK(max_abs(f.ricci) == 0.0);
  CHECK(max_abs(f.einstein) == 0.0);
}

TEST_CASE("three-dimensional embedded chart: Einstein tensor need not vanish") {
  // 3-sphere of radius 1 in R^4 via hyperspherical angles.
  ChartSpec s;
  s.name = "s3";
  s.dim = 3;
  s.ambient = 4;
  s.exprs = {"cos(q1)", "sin(q1)*cos(q2)", "sin(q1)*sin(q2)*cos(q3)", "sin(q1)*sin(q2)*sin(q3)"};
  s.guard = "sin(q1)*sin(q2)";
  Chart chart(s);
  auto sum = ricci_scalar_einstein(chart, Coord{{1.0, 1.2, 0.4}}, CurvatureSource::Riemann);
  CHECK(sum.scalar == doctest::Approx(6.0));  // D(D-1)/r^2
  // Einstein tensor of S^3: G = R_{nl} - g R/2 = 2g - 3g = -g
  CHECK(max_abs(sum.einstein + chart.metric(Coord{{1.0, 1.2, 0.4}})) < 1e-10);
}
