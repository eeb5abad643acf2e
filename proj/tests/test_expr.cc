#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "symcon/errors.hh"
#include "symcon/expr.hh"

using namespace symcon;

namespace {

double ev(const std::string& text, std::vector<double> x = {},
          std::vector<double> u = {}, std::vector<double> d = {}) {
  ExprDims dims{static_cast<int>(x.size()), static_cast<int>(u.size()),
                static_cast<int>(d.size())};
  Expr e = Expr::parse(text, dims);
  return e.eval(x.data(), u.data(), d.data());
}

}  /* namespace */

TEST_CASE("arithmetic and precedence") {
  CHECK(ev("2+3*4") == 14.0);
  CHECK(ev("(2+3)*4") == 20.0);
  CHECK(ev("7-4-2") == 1.0);
  CHECK(ev("8/4/2") == 1.0);
  CHECK(ev("2^3^2") == 512.0);   /* right associative */
  CHECK(ev("-2^2") == -4.0);     /* unary minus binds weaker than ^ */
  CHECK(ev("2^-1") == 0.5);
  CHECK(ev("--3") == 3.0);
  CHECK(ev("1.5e2+0.5") == 150.5);
}

TEST_CASE("variables by kind and index") {
  CHECK(ev("x1", {3.0, 4.0}) == 3.0);
  CHECK(ev("x2", {3.0, 4.0}) == 4.0);
  CHECK(ev("x1*u1+d1", {2.0}, {5.0}, {7.0}) == 17.0);
}

TEST_CASE("functions") {
  CHECK(ev("sin(0)") == 0.0);
  CHECK(ev("cos(0)") == 1.0);
  CHECK(ev("tan(0.5)") == doctest::Approx(std::tan(0.5)).epsilon(1e-15));
  CHECK(ev("exp(1)") == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(ev("sqrt(2)") == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(ev("abs(-3.5)") == 3.5);
  CHECK(ev("sin(cos(1))") == doctest::Approx(std::sin(std::cos(1.0))));
}

TEST_CASE("pendulum acceleration expression") {
  std::string text = "-(9.8/0.5)*sin(x1) - (2/0.6)*x2 + u1/(0.6*0.5^2) + d1*cos(x1)";
  ExprDims dims{2, 1, 1};
  Expr e = Expr::parse(text, dims);
  double x[2] = {0.3, -0.2};
  double u[1] = {1.1};
  double d[1] = {0.015};
  double want = -(9.8 / 0.5) * std::sin(0.3) - (2.0 / 0.6) * (-0.2) +
                1.1 / (0.6 * 0.25) + 0.015 * std::cos(0.3);
  CHECK(e.eval(x, u, d) == doctest::Approx(want).epsilon(1e-15));
  CHECK(e.text() == text);
}

TEST_CASE("whitespace tolerated") {
  CHECK(ev("  1 +\t2 * ( 3 - 1 ) ") == 5.0);
}

TEST_CASE("parse errors carry the config code") {
  ExprDims dims{2, 1, 1};
  auto bad = [&](const std::string& t) {
    try {
      Expr::parse(t, dims);
      return false;
    } catch (const Error& e) {
      return e.code() == errc::config;
    }
  };
  CHECK(bad(""));
  CHECK(bad("x3"));       /* index out of range */
  CHECK(bad("x0"));
  CHECK(bad("u2"));
  CHECK(bad("y1"));       /* unknown identifier */
  CHECK(bad("1+"));
  CHECK(bad("(1+2"));
  CHECK(bad("1 2"));
  CHECK(bad("sin"));
  CHECK(bad("sin 1"));
  CHECK(bad("foo(1)"));
  CHECK(bad("1..2"));
}

TEST_CASE("deep operand stacks are rejected instead of overflowing") {
  /* right-leaning additions need one stack slot per nesting level; variables
   * keep the constant folder from collapsing the tree */
  std::string deep = "x1";
  for (int i = 0; i < 70; ++i) deep = "x1+(" + deep + ")";
  ExprDims dims{1, 0, 0};
  CHECK_THROWS_AS(Expr::parse(deep, dims), Error);
  /* a left-leaning chain of the same size is fine */
  std::string flat = "x1";
  for (int i = 0; i < 70; ++i) flat += "+x1";
  const double x = 1.0;
  CHECK(Expr::parse(flat, dims).eval(&x, nullptr, nullptr) == 71.0);
  /* all-constant trees fold away regardless of shape */
  std::string folded = "1";
  for (int i = 0; i < 70; ++i) folded = "1+(" + folded + ")";
  CHECK(Expr::parse(folded, ExprDims{0, 0, 0}).eval(nullptr, nullptr, nullptr) ==
        71.0);
}

TEST_CASE("empty expression object") {
  Expr e;
  CHECK(e.empty());
}
