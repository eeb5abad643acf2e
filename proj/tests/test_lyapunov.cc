#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "symcon/errors.hh"
#include "symcon/flow.hh"
#include "symcon/lyapunov.hh"
#include "symcon/system.hh"

using namespace symcon;

namespace {

/* certificate that actually satisfies both conditions for the pendulum;
 * lambda and the supply rates come from a corner analysis of the linearized
 * family, the sandwich bounds from the quadratic form extrema */
QuadraticCert valid_pendulum_cert() {
  QuadraticCert c;
  c.n = 2;
  c.P = {17.7, 0.3, 0.3, 1.0};
  c.lambda = 0.3;
  c.alpha_lo = {0.99, 2};
  c.alpha_hi = {19.3, 2};
  c.sigma_u = {19.7, 1};
  c.sigma_d = {2.95, 1};
  return c;
}

}  /* namespace */

TEST_CASE("class K functions") {
  KinfFn lin{2.5, 1};
  CHECK(lin(2.0) == 5.0);
  CHECK(lin.inverse(5.0) == 2.0);
  KinfFn quad{1.2, 2};
  CHECK(quad(3.0) == doctest::Approx(10.8));
  CHECK(quad.inverse(10.8) == doctest::Approx(3.0));
  CHECK(quad.inverse(0.0) == 0.0);
  CHECK_THROWS_AS(KinfFn({0.0, 1}).validate("a"), Error);
  CHECK_THROWS_AS(KinfFn({-1.0, 2}).validate("a"), Error);
  CHECK_THROWS_AS(KinfFn({1.0, 3}).validate("a"), Error);
}

TEST_CASE("quadratic form and gradient") {
  QuadraticCert c = pendulum_cert();
  CHECK(c.n == 2);
  CHECK(c.lambda == 0.77);
  CHECK(c.P == std::vector<double>{1.5, 0.3, 0.3, 1.5});
  Vec x{0.4, -0.2}, y{0.1, 0.3};
  /* e = (0.3, -0.5) */
  double want = 1.5 * 0.09 + 2.0 * 0.3 * 0.3 * (-0.5) + 1.5 * 0.25;
  CHECK(c.V(x, y) == doctest::Approx(want).epsilon(1e-14));
  Vec g = c.grad_x(x, y);
  CHECK(g[0] == doctest::Approx(2.0 * (1.5 * 0.3 + 0.3 * (-0.5))).epsilon(1e-14));
  CHECK(g[1] == doctest::Approx(2.0 * (0.3 * 0.3 + 1.5 * (-0.5))).epsilon(1e-14));
  CHECK(c.V(x, x) == 0.0);
  c.validate();
}

TEST_CASE("certificate validation rejects bad data") {
  QuadraticCert c = pendulum_cert();
  c.P = {1.5, 0.2, 0.3, 1.5};  /* asymmetric */
  CHECK_THROWS_AS(c.validate(), Error);
  c = pendulum_cert();
  c.P = {1.0, 2.0, 2.0, 1.0};  /* indefinite */
  CHECK_THROWS_AS(c.validate(), Error);
  c = pendulum_cert();
  c.lambda = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = pendulum_cert();
  c.P = {1.5, 0.3, 0.3};
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("published sandwich bounds hold") {
  SystemDef sys = pendulum_preset();
  CondReport r = check_condition_i(pendulum_cert(), sys);
  CHECK(r.pass);
  CHECK(r.worst <= 1e-12);
}

TEST_CASE("published dissipation inequality fails at a corner") {
  /* the published rate/supply combination is not actually dissipative:
   * the deterministic corner sweep exhibits a violation of size >= 25 */
  SystemDef sys = pendulum_preset();
  CondReport r = check_condition_ii(pendulum_cert(), sys);
  CHECK(!r.pass);
  CHECK(r.worst >= 25.0);
  CHECK(!r.witness.empty());
  CHECK(!r.detail.empty());
}

TEST_CASE("corrected certificate satisfies both conditions") {
  SystemDef sys = pendulum_preset();
  QuadraticCert c = valid_pendulum_cert();
  c.validate();
  CondReport i = check_condition_i(c, sys);
  CHECK(i.pass);
  CondReport ii = check_condition_ii(c, sys);
  CHECK(ii.pass);
  CHECK(ii.worst <= 1e-9);
}

TEST_CASE("condition checker reports violations with witnesses") {
  SystemDef sys = pendulum_preset();
  QuadraticCert c = valid_pendulum_cert();
  c.alpha_lo = {18.0, 2};  /* stronger than the true minimum 17.61 on axis 1 */
  CondReport r = check_condition_i(c, sys);
  CHECK(!r.pass);
  CHECK(r.worst > 0.0);
  CHECK(r.witness.size() == 2);
}

TEST_CASE("state quantization slope at the published certificate") {
  SystemDef sys = pendulum_preset();
  double g = gamma_sup(pendulum_cert(), sys.X);
  /* attained at the difference-box corner (pi/2, 1): 3*pi/2 + 0.6 */
  CHECK(g == doctest::Approx(3.0 * 3.14159265358979323846 / 2.0 + 0.6)
                 .epsilon(1e-14));
}

TEST_CASE("sampled flow contraction refutes the published rate") {
  /* V(phi(x)-phi(y)) / V(x-y) under equal inputs: the sampled maximum over
   * the operating box sits near 0.56, above exp(-0.77) ~ 0.463, so the
   * published lambda cannot hold for the integrated map; the corrected
   * lambda = 0.3 bound exp(-0.3) ~ 0.741 holds with margin */
  SystemDef sys = pendulum_preset();
  QuadraticCert pub = pendulum_cert();
  FlowConfig cfg;
  cfg.tau = 1.0;
  cfg.substeps = 64;
  std::mt19937_64 rng(20260814);
  auto unif = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  double worst = 0.0;
  for (int t = 0; t < 2000; ++t) {
    Vec x{unif(sys.X.lo[0], sys.X.hi[0]), unif(sys.X.lo[1], sys.X.hi[1])};
    Vec y{unif(sys.X.lo[0], sys.X.hi[0]), unif(sys.X.lo[1], sys.X.hi[1])};
    double v0 = pub.V(x, y);
    if (v0 < 1e-6) continue;
    Vec u{unif(sys.U.lo[0], sys.U.hi[0])};
    Vec dval{unif(sys.D.lo[0], sys.D.hi[0])};
    DisturbanceSignal d = constant_disturbance(dval);
    Vec xe = integrate(sys, cfg, x, u, d);
    Vec ye = integrate(sys, cfg, y, u, d);
    worst = std::max(worst, pub.V(xe, ye) / v0);
  }
  CHECK(worst > std::exp(-0.77));
  CHECK(worst <= 0.60);
  CHECK(worst <= std::exp(-0.3) + 1e-6);
}
