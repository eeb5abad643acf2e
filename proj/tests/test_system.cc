#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "symcon/errors.hh"
#include "symcon/system.hh"

using namespace symcon;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("pendulum preset shape") {
  SystemDef sys = pendulum_preset();
  CHECK(sys.name == "pendulum");
  CHECK(sys.n == 2);
  CHECK(sys.m == 1);
  CHECK(sys.l == 1);
  CHECK(sys.X.lo[0] == doctest::Approx(-kPi / 4.0).epsilon(1e-15));
  CHECK(sys.X.hi[0] == doctest::Approx(kPi / 4.0).epsilon(1e-15));
  CHECK(sys.X.lo[1] == -0.5);
  CHECK(sys.X.hi[1] == 0.5);
  CHECK(sys.U.lo[0] == -1.5);
  CHECK(sys.U.hi[0] == 1.5);
  CHECK(sys.D.lo[0] == -0.01);
  CHECK(sys.D.hi[0] == 0.02);
  CHECK(sys.kappa_d == 0.002);
  CHECK(sys.dist_bound() == 0.02);
}

TEST_CASE("pendulum field values") {
  SystemDef sys = pendulum_preset();
  double x[2] = {0.3, -0.2};
  double u[1] = {1.1};
  double d[1] = {0.015};
  double out[2];
  eval_field(sys, x, u, d, out);
  CHECK(out[0] == -0.2);
  double want = -(9.8 / 0.5) * std::sin(0.3) - (2.0 / 0.6) * (-0.2) +
                1.1 / (0.6 * 0.25) + 0.015 * std::cos(0.3);
  CHECK(out[1] == doctest::Approx(want).epsilon(1e-15));
}

TEST_CASE("parse_system round trips a custom model") {
  std::string text = R"({
    "name": "dbl",
    "n": 2, "m": 1, "l": 1,
    "X": [[-1.0, 1.0], [-1.0, 1.0]],
    "U": [[-0.5, 0.5]],
    "D": [[-0.1, 0.1]],
    "kappa_d": 0.05,
    "f": ["x2", "u1 + d1"]
  })";
  SystemDef sys = parse_system(text);
  CHECK(sys.name == "dbl");
  CHECK(sys.n == 2);
  CHECK(sys.m == 1);
  CHECK(sys.l == 1);
  double x[2] = {0.25, -0.75};
  double u[1] = {0.5};
  double d[1] = {-0.1};
  double out[2];
  eval_field(sys, x, u, d, out);
  CHECK(out[0] == -0.75);
  CHECK(out[1] == 0.4);
}

TEST_CASE("parse_system rejects malformed input") {
  auto bad = [](const std::string& t) {
    try {
      parse_system(t);
      return false;
    } catch (const Error& e) {
      return e.code() == errc::config;
    }
  };
  CHECK(bad("not json"));
  CHECK(bad("{}"));
  /* dimension fields are mandatory */
  CHECK(bad(R"({"name":"b","X":[[-1,1]],"U":[[-1,1]],"D":[[-1,1]],
               "kappa_d":0.1,"f":["x1"]})"));
  /* f arity must match n */
  CHECK(bad(R"({"name":"b","n":2,"m":1,"l":1,
               "X":[[-1,1],[-1,1]],"U":[[-1,1]],"D":[[-1,1]],
               "kappa_d":0.1,"f":["x2"]})"));
  /* inverted box */
  CHECK(bad(R"({"name":"b","n":1,"m":1,"l":1,
               "X":[[1,-1]],"U":[[-1,1]],"D":[[-1,1]],
               "kappa_d":0.1,"f":["x1"]})"));
  /* negative Lipschitz budget */
  CHECK(bad(R"({"name":"b","n":1,"m":1,"l":1,
               "X":[[-1,1]],"U":[[-1,1]],"D":[[-1,1]],
               "kappa_d":-0.1,"f":["x1"]})"));
  /* expression references a state beyond n */
  CHECK(bad(R"({"name":"b","n":1,"m":1,"l":1,
               "X":[[-1,1]],"U":[[-1,1]],"D":[[-1,1]],
               "kappa_d":0.1,"f":["x2"]})"));
  /* origin must be an equilibrium of the unforced field */
  CHECK(bad(R"({"name":"b","n":1,"m":1,"l":1,
               "X":[[-1,1]],"U":[[-1,1]],"D":[[-1,1]],
               "kappa_d":0.1,"f":["x1 + 0.5"]})"));
}

TEST_CASE("constant disturbance") {
  DisturbanceSignal d = constant_disturbance({0.01, -0.02});
  CHECK(d.l == 2);
  auto v = d.at(0.0);
  CHECK(v[0] == 0.01);
  CHECK(v[1] == -0.02);
  CHECK(d.at(17.3) == v);
}

TEST_CASE("cosine disturbance is in the admitted class") {
  SystemDef sys = pendulum_preset();
  DisturbanceSignal d = cosine_disturbance(sys.D, sys.kappa_d);
  REQUIRE(d.l == 1);
  /* starts at the upper edge */
  CHECK(d.at(0.0)[0] == doctest::Approx(0.02).epsilon(1e-15));
  double lo = sys.D.lo[0], hi = sys.D.hi[0];
  /* slope peaks a quarter period in, so sample past that point */
  double omega = 2.0 * sys.kappa_d / (hi - lo);
  double horizon = 1.2 * (kPi / 2.0) / omega;
  const double dt = 1e-3;
  const int steps = static_cast<int>(horizon / dt);
  double prev = d.at(0.0)[0];
  double worst_slope = 0.0;
  bool in_range = true;
  for (int i = 1; i <= steps; ++i) {
    double cur = d.at(i * dt)[0];
    in_range = in_range && cur >= lo - 1e-12 && cur <= hi + 1e-12;
    worst_slope = std::max(worst_slope, std::abs(cur - prev) / dt);
    prev = cur;
  }
  CHECK(in_range);
  /* the slope budget is exactly kappa_d, attained mid swing */
  CHECK(worst_slope <= sys.kappa_d + 1e-9);
  CHECK(worst_slope >= 0.99 * sys.kappa_d);
}
