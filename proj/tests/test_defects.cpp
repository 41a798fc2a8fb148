#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nonholo/connection.hpp"
#include "nonholo/defects.hpp"
#include "nonholo/errors.hpp"
#include "oracles.hpp"

using namespace nonholo;

namespace {

const double pi = std::numbers::pi;

LoopSpec enclosing() { return square_loop(Coord{{0.0, 0.0}}, 1.0); }
LoopSpec offset_loop() { return square_loop(Coord{{0.3, -0.2}}, 0.7); }
LoopSpec far_loop() { return square_loop(Coord{{3.0, 2.0}}, 0.5); }

LoopSpec triangle() {
  LoopSpec l;
  l.vertices = {Coord{{2.0, -1.0}}, Coord{{0.0, 2.0}}, Coord{{-1.5, -1.0}}, Coord{{2.0, -1.0}}};
  l.samples_per_edge = 16;
  return l;
}

}  // namespace

TEST_CASE("defect charts") {
  auto d0 = make_dislocation(0.0);
  CHECK(max_abs(d0.chart.triad(Coord{{0.4, -0.3}}) - Mat::Identity(2, 2)) == 0.0);
  auto d = make_dislocation(0.1);
  Mat e(2, 2);
  e << 1, 0, 0, 1.1;
  CHECK(max_abs(d.chart.triad(Coord{{1.0, 0.0}}) - e) < 1e-15);
  CHECK(d.kind == DefectKind::Dislocation);
  CHECK(d.chart.kind() == ChartKind::TriadField);
  CHECK_FALSE(d.chart.admits(Coord{{0.0, 0.0}}));

  auto w0 = make_disclination(0.0);
  CHECK(max_abs(w0.chart.metric(Coord{{0.4, -0.3}}) - Mat::Identity(2, 2)) < 1e-15);
  auto w = make_disclination(0.01);
  CHECK(w.chart.kind() == ChartKind::HolonomicMap);
  CHECK_FALSE(w.chart.admits(Coord{{0.0, 0.0}}));
  CHECK_THROWS_AS(make_dislocation(NAN), Error);
  CHECK_THROWS_AS(make_disclination(0.7), Error);
}

TEST_CASE("disclination metric to first order") {
  // g = 1 + 2 Om * (symmetric part of d(eps q phi)); check against finite differences of the map
  auto w = make_disclination(0.02);
  for (const auto& q : oracle::random_points(w.chart, Vec{{0.3, 0.3}}, Vec{{2.0, 2.0}}, 10, 29))
    CHECK(max_abs(w.chart.metric(q) - oracle::metric(w.chart, q)) < 1e-8);
}

TEST_CASE("winding integral") {
  const auto grad = angle_gradient_field();
  CHECK(winding_integral(grad, enclosing()) == doctest::Approx(2 * pi).epsilon(1e-12));
  CHECK(std::abs(winding_integral(grad, enclosing()) - 2 * pi) < 1e-6);
  CHECK(std::abs(winding_integral(grad, far_loop())) < 1e-8);
  CHECK(std::abs(winding_integral(grad, square_loop(Coord{{0.0, 0.0}}, 1.0, 2)) - 4 * pi) < 1e-6);
  CHECK(std::abs(winding_integral(grad, triangle()) - 2 * pi) < 1e-6);
  CHECK(winding_number(enclosing(), Coord::Zero(2)) == doctest::Approx(1.0));
  CHECK(winding_number(far_loop(), Coord::Zero(2)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("burgers vector") {
  for (double eps : {0.0, 0.01, 0.05, 0.1}) {
    auto d = make_dislocation(eps);
    for (const auto& loop : {enclosing(), offset_loop(), triangle()}) {
      auto b = burgers_vector(d, loop);
      CHECK(std::abs(b.b[0]) < 1e-6);
      CHECK(std::abs(b.b[1] - 2 * pi * eps) < 1e-6);
      CHECK(b.b_over_2pi[1] == doctest::Approx(eps).epsilon(1e-9));
      CHECK(b.winding == doctest::Approx(1.0));
    }
    CHECK(burgers_vector(d, far_loop()).b.norm() < 1e-8);
  }
  // linear in eps
  const double b1 = burgers_vector(make_dislocation(0.01), enclosing()).b[1];
  const double b5 = burgers_vector(make_dislocation(0.05), enclosing()).b[1];
  const double b10 = burgers_vector(make_dislocation(0.1), enclosing()).b[1];
  CHECK(std::abs(b5 / b1 - 5) / 5 < 1e-6);
  CHECK(std::abs(b10 / b1 - 10) / 10 < 1e-6);
}

TEST_CASE("pointwise torsion vanishes off the core while the flux does not") {
  auto d = make_dislocation(0.1);
  for (const auto& q : oracle::random_points(d.chart, Vec{{-2.0, -2.0}}, Vec{{2.0, 2.0}}, 30, 31,
                                             [](const Coord& p) { return p.norm() > 0.2; }))
    CHECK(torsion_tensor(d.chart, q).max_abs() < 1e-10);
  CHECK(torsion_flux(d, enclosing()).norm() > 0.5);
}

TEST_CASE("torsion flux") {
  CHECK(torsion_flux(make_dislocation(0.0), enclosing()).norm() < 1e-12);
  auto d = make_dislocation(0.1);
  const Vec f = torsion_flux(d, enclosing());
  CHECK((f - burgers_vector(d, enclosing()).b).norm() < 1e-8);
  CHECK((torsion_flux(d, square_loop(Coord::Zero(2), 0.5)) - torsion_flux(d, square_loop(Coord::Zero(2), 2.0))).norm() <
        1e-8);
}

TEST_CASE("frank angle") {
  CHECK(std::abs(frank_angle(make_disclination(0.0), enclosing())) < 1e-12);
  const double om = 0.01;
  auto w = make_disclination(om);
  const double f = frank_angle(w, offset_loop());
  CHECK(std::abs(f + 2 * pi * om) < 0.02 * 2 * pi * om);
  CHECK(std::abs(frank_angle(w, far_loop())) < 1e-6);
  CHECK(std::abs(frank_angle(w, triangle()) - f) < 1e-6);
}

TEST_CASE("loop validation and quadrature guard") {
  LoopSpec open;
  open.vertices = {Coord{{1.0, 0.0}}, Coord{{0.0, 1.0}}, Coord{{-1.0, 0.0}}};
  CHECK_THROWS_AS(open.validate(), Error);
  LoopSpec sparse = enclosing();
  sparse.samples_per_edge = 4;
  CHECK_THROWS_AS(sparse.validate(), Error);
  // An edge through the core
  LoopSpec through;
  through.vertices = {Coord{{-1.0, 0.0}}, Coord{{1.0, 0.0}}, Coord{{0.0, 1.0}}, Coord{{-1.0, 0.0}}};
  try {
    burgers_vector(make_dislocation(0.1), through);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::QuadratureDivergence || e.kind() == ErrorKind::SingularPoint));
  }
}
