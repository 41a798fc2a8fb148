#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "nonholo/dual.hpp"
#include "nonholo/errors.hpp"
#include "nonholo/expression.hpp"

using namespace nonholo;

namespace {

double eval(const std::string& src, std::vector<double> vars, std::map<std::string, double> params = {}) {
  auto e = Expression::parse(src, SymbolTable::coordinates(static_cast<int>(vars.size()), params));
  return e(vars);
}

}  // namespace

TEST_CASE("arithmetic and precedence") {
  CHECK(eval("1 + 2*3", {}) == doctest::Approx(7));
  CHECK(eval("(1 + 2)*3", {}) == doctest::Approx(9));
  CHECK(eval("2^3^2", {}) == doctest::Approx(512));
  CHECK(eval("-2^2", {}) == doctest::Approx(-4));
  CHECK(eval("8/4/2", {}) == doctest::Approx(1));
  CHECK(eval("q1*q2 - q2", {3, 2}) == doctest::Approx(4));
  CHECK(eval("1e-3*1.5E2", {}) == doctest::Approx(0.15));
  CHECK(eval("pi", {}) == doctest::Approx(std::numbers::pi));
}

TEST_CASE("functions and parameters") {
  CHECK(eval("sin(q1)^2 + cos(q1)^2", {0.7}) == doctest::Approx(1));
  CHECK(eval("atan2(q2, q1)", {-1, 1e-30}) == doctest::Approx(std::numbers::pi));
  CHECK(eval("sqrt(exp(log(q1)))", {4}) == doctest::Approx(2));
  CHECK(eval("r*cosh(0) + sinh(0) + tan(0) + atan(0)", {}, {{"r", 2.5}}) == doctest::Approx(2.5));
  CHECK(eval("q1^0.5", {9}) == doctest::Approx(3));
}

TEST_CASE("parse errors carry line, column and token") {
  try {
    Expression::parse("q1*frob(q2)", SymbolTable::coordinates(2));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 4);
    CHECK(e.token() == "frob");
    CHECK(e.kind() == ErrorKind::Parse);
  }
  CHECK_THROWS_AS(Expression::parse("q3", SymbolTable::coordinates(2)), ParseError);
  CHECK_THROWS_AS(Expression::parse("1 +", SymbolTable::coordinates(1)), ParseError);
  CHECK_THROWS_AS(Expression::parse("(1", SymbolTable::coordinates(1)), ParseError);
  CHECK_THROWS_AS(Expression::parse("1 $ 2", SymbolTable::coordinates(1)), ParseError);
  CHECK_THROWS_AS(Expression::parse("sin(1, 2)", SymbolTable::coordinates(1)), ParseError);
  CHECK_THROWS_AS(Expression::parse("", SymbolTable::coordinates(1)), ParseError);
  try {
    Expression::parse("q1 +\n  bogus", SymbolTable::coordinates(1));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
}

TEST_CASE("nested duals give exact mixed partials") {
  using D1 = Dual<double, 2>;
  using D2 = Dual<D1, 2>;
  auto e = Expression::parse("sin(q1)*exp(q2) + q1^3*q2 + atan2(q2, q1)", SymbolTable::coordinates(2));
  const double x = 0.4, y = -0.3;
  std::vector<D2> v{Seed<D2>::variable(x, 0), Seed<D2>::variable(y, 1)};
  const D2 f = e.evaluate<D2>(v);
  const double r2 = x * x + y * y;
  CHECK(f.v.v == doctest::Approx(std::sin(x) * std::exp(y) + x * x * x * y + std::atan2(y, x)).epsilon(1e-15));
  // d/dx
  CHECK(f.v.d[0] == doctest::Approx(std::cos(x) * std::exp(y) + 3 * x * x * y - y / r2).epsilon(1e-14));
  // d2/dxdy
  const double fxy = std::cos(x) * std::exp(y) + 3 * x * x + (y * y - x * x) / (r2 * r2);
  CHECK(f.d[1].d[0] == doctest::Approx(fxy).epsilon(1e-14));
  CHECK(f.d[0].d[1] == doctest::Approx(fxy).epsilon(1e-14));
}

TEST_CASE("dual derivatives agree with central differences on random smooth expressions") {
  using D1 = Dual<double, 3>;
  const std::vector<std::string> exprs = {"sin(q1*q2) + q3^2", "exp(q1 - q2)*cos(q3)", "sqrt(1 + q1^2 + q2^2)*log(2 + q3)",
                                          "atan(q1) / (3 + sinh(q2)) + cosh(q3)", "q1^2.5 * tan(q2/3)"};
  for (const auto& src : exprs) {
    auto e = Expression::parse(src, SymbolTable::coordinates(3));
    const std::vector<double> p{0.8, 0.3, 0.45};
    std::vector<D1> v;
    for (int k = 0; k < 3; ++k) v.push_back(Seed<D1>::variable(p[k], k));
    const D1 f = e.evaluate<D1>(v);
    for (int k = 0; k < 3; ++k) {
      const double h = 1e-5;
      auto a = p, b = p;
      a[k] += h;
      b[k] -= h;
      const double fd = (e(a) - e(b)) / (2 * h);
      CHECK(std::abs(f.d[k] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}
