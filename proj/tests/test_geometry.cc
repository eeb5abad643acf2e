#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "symcon/errors.hh"
#include "symcon/geometry.hh"

using namespace symcon;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("norms") {
  CHECK(norm_inf({1.0, -3.0, 2.0}) == 3.0);
  CHECK(norm_inf({}) == 0.0);
  CHECK(dist_inf({1.0, 2.0}, {0.5, 4.0}) == 2.0);
}

TEST_CASE("box basics") {
  Box b({-1.0, 0.0}, {1.0, 4.0});
  CHECK(b.dim() == 2);
  CHECK(b.side(0) == 2.0);
  CHECK(b.side(1) == 4.0);
  CHECK(b.contains({0.0, 2.0}));
  CHECK(b.contains({1.0, 4.0}));
  CHECK(!b.contains({1.0 + 1e-9, 0.0}));
  CHECK(b.contains({1.0 + 1e-9, 0.0}, 1e-8));
  CHECK(b.sup_norm() == 4.0);
  CHECK(b.center()[0] == 0.0);
  CHECK(b.center()[1] == 2.0);
  CHECK(mu_hat(b) == 2.0);
  CHECK_THROWS_AS(Box({0.0}, {0.0}), Error);
  CHECK_THROWS_AS(Box({0.0, 1.0}, {1.0}), Error);
}

TEST_CASE("pendulum state lattice has the published cardinality") {
  Box X({-kPi / 4.0, -0.5}, {kPi / 4.0, 0.5});
  Lattice lat(X, kPi / 2000.0);
  CHECK(lat.axis_count(0) == 501);  /* keys -250..250 */
  CHECK(lat.axis_count(1) == 319);  /* keys -159..159 */
  CHECK(lat.size() == 159819);
  CHECK(lat.kmin(0) == -250);
  CHECK(lat.kmax(0) == 250);
  CHECK(lat.kmin(1) == -159);
  CHECK(lat.kmax(1) == 159);
}

TEST_CASE("pendulum control lattice has the published cardinality") {
  Box U({-1.5}, {1.5});
  Lattice lat(U, 0.001);
  CHECK(lat.size() == 1501);
  CHECK(lat.kmin(0) == -750);
  CHECK(lat.kmax(0) == 750);
}

TEST_CASE("boundary keys survive floating point quotients") {
  /* hi/spacing lands a hair under an integer; the key must still be kept */
  Box X({-kPi / 4.0}, {kPi / 4.0});
  Lattice lat(X, kPi / 2000.0);
  Key edge{250};
  CHECK(lat.contains_key(edge));
  CHECK(lat.point(edge)[0] == doctest::Approx(kPi / 4.0).epsilon(1e-12));
}

TEST_CASE("index and key round trips in enumeration order") {
  Box b({-0.1, -0.2}, {0.1, 0.2});
  Lattice lat(b, 0.05);
  REQUIRE(lat.size() == 3 * 5);
  uint64_t idx = 0;
  for (int64_t k0 = lat.kmin(0); k0 <= lat.kmax(0); ++k0)
    for (int64_t k1 = lat.kmin(1); k1 <= lat.kmax(1); ++k1) {
      Key k{k0, k1};
      CHECK(lat.index_of(k) == idx);
      CHECK(lat.key_of(idx) == k);
      ++idx;
    }
  auto keys = lat.enumerate_keys();
  REQUIRE(keys.size() == lat.size());
  CHECK(keys.front() == Key{lat.kmin(0), lat.kmin(1)});
  CHECK(keys.back() == Key{lat.kmax(0), lat.kmax(1)});
  auto pts = lat.enumerate_points();
  CHECK(pts[7] == lat.point(keys[7]));
}

TEST_CASE("lattice point coordinates are 2*mu*k") {
  Lattice lat(Box({-1.0}, {1.0}), 0.25);
  CHECK(lat.point(Key{-2})[0] == -1.0);
  CHECK(lat.point(Key{1})[0] == 0.5);
  /* point() is the bare coordinate map; membership is a separate question */
  CHECK(!lat.contains_key(Key{3}));
  CHECK(lat.contains_key(Key{2}));
  CHECK_THROWS_AS((void)lat.index_of(Key{-3}), Error);
}

TEST_CASE("nearest point and tie breaking") {
  Lattice lat(Box({-1.0, -1.0}, {1.0, 1.0}), 0.25);  /* spacing 0.5 */
  CHECK(lat.nearest({0.26, -0.9}) == Key{1, -2});
  /* 0.25 is equidistant between keys 0 and 1: the smaller key wins */
  CHECK(lat.nearest({0.25, 0.0}) == Key{0, 0});
  /* clamped to the box ranges */
  CHECK(lat.nearest({5.0, -5.0}) == Key{2, -2});
  Vec p = lat.point(lat.nearest({0.26, -0.9}));
  CHECK(dist_inf(p, {0.26, -0.9}) <= 0.25 + 1e-12);
}

TEST_CASE("empty lattice when the box traps no point") {
  /* [0.3, 0.4] with spacing 1.0 holds no multiple of 1.0 */
  Lattice lat(Box({0.3}, {0.4}), 0.5);
  CHECK(lat.size() == 0);
  CHECK(lat.empty());
}

TEST_CASE("degenerate precision rejected") {
  CHECK_THROWS_AS(Lattice(Box({0.0}, {1.0}), 0.0), Error);
  CHECK_THROWS_AS(Lattice(Box({0.0}, {1.0}), -0.1), Error);
}

TEST_CASE("keys csv round trip") {
  Lattice lat(Box({-0.5, -0.5}, {0.5, 0.5}), 0.25);
  std::ostringstream os;
  write_keys_csv(os, lat);
  std::istringstream is(os.str());
  auto keys = read_keys_csv(is, 2);
  REQUIRE(keys.size() == lat.size());
  CHECK(keys == lat.enumerate_keys());
}
