#include <cmath>

#include "doctest.h"
#include "gmy/maps.hpp"

using namespace gmy;

TEST_SUITE("maps") {
  TEST_CASE("closed-form values") {
    const MapSpec d = make_doubling(), t = make_tent(), l = make_logistic();
    CHECK(evaluate(d, 0.3L) == doctest::Approx(0.6));
    CHECK(evaluate(d, 0.75L) == doctest::Approx(0.5));
    CHECK(evaluate(t, 0.2L) == doctest::Approx(0.4));
    CHECK(evaluate(t, 0.8L) == doctest::Approx(0.4));
    CHECK(evaluate(l, 0.25L) == doctest::Approx(0.75));
    CHECK(inv_norm(d, 0.1L) == doctest::Approx(0.5));
    CHECK(inv_norm(l, 0.25L) == doctest::Approx(0.5));
  }

  TEST_CASE("critical and singular points") {
    const MapSpec l = make_logistic();
    CHECK_THROWS_AS(inv_norm(l, 0.5L), Error);
    CHECK(l.dist_to_critical(0.4L) == doctest::Approx(0.1));
    CHECK(truncated_distance(l, 0.4L, 0.05L) == 1);
    CHECK(truncated_distance(l, 0.49L, 0.05L) == doctest::Approx(0.01));
    CHECK(truncated_distance(make_doubling(), 0.3L, 0.1L) == 1);
    CHECK_THROWS_AS(evaluate(l, 1.5L), Error);
  }

  TEST_CASE("branch inverses round-trip on every built-in map") {
    for (const auto& name : builtin_names()) {
      const MapSpec m = make_builtin(name);
      for (std::size_t b = 0; b < m.branches().size(); ++b) {
        for (Real y : {0.03L, 0.31L, 0.77L, 0.96L}) {
          const Real x = branch_inverse(m, b, y);
          CHECK(m.branches()[b].domain.contains(x));
          CHECK(std::fabs(evaluate(m, x) - y) < 1e-15L);
        }
      }
      for (const Real x : m.preimages(0.4L)) CHECK(std::fabs(evaluate(m, x) - 0.4L) < 1e-15L);
    }
  }

  TEST_CASE("Manneville-Pomeau is neutral at 0 and degree 2") {
    const MapSpec mp = make_manneville_pomeau(0.5L);
    CHECK(mp.degree() == 2);
    CHECK(inv_norm(mp, 1e-9L) == doctest::Approx(1).epsilon(1e-3));
    CHECK(inv_norm(mp, 0.3L) < 1);
    CHECK(mp.preimages(0.25L).size() == 2);
  }

  TEST_CASE("orbit buffer caches agree with the map") {
    const MapSpec l = make_logistic();
    const OrbitBuffer o = iterate_orbit(l, 0.123L, 200, 0.1L, 3);
    REQUIRE(o.length() == 200);
    for (std::size_t j = 0; j < o.length(); ++j) {
      CHECK(o.points[j + 1] == evaluate(l, o.points[j]));
      CHECK(o.log_inv_deriv[j] == doctest::Approx(static_cast<double>(std::log(inv_norm(l, o.points[j])))));
      CHECK(o.log_trunc_dist[j] >= 0);
    }
  }

  TEST_CASE("doubling orbits do not collapse to 0") {
    const OrbitBuffer o = iterate_orbit(make_doubling(), 0.375L, 400, 1, 11);
    std::size_t zeros = 0;
    for (Real x : o.points) zeros += x == 0;
    CHECK(zeros == 0);
  }

  TEST_CASE("unknown map name") { CHECK_THROWS_AS(make_builtin("henon"), Error); }
}
