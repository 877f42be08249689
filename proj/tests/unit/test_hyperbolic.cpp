#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "gmy/hyperbolic.hpp"

using namespace gmy;

TEST_SUITE("hyperbolic") {
  TEST_CASE("fast detector equals the brute force on every built-in map") {
    HyperbolicParams hp;
    hp.sigma = 0.8L;
    hp.delta = 0.05L;
    hp.b = 0.3L;
    for (const auto& name : builtin_names()) {
      const MapSpec m = make_builtin(name);
      Rng rng(3, 1);
      for (auto conv : {IndexConvention::Paper, IndexConvention::Shifted}) {
        hp.index_convention = conv;
        for (int i = 0; i < 40; ++i) {
          const OrbitBuffer o = iterate_orbit(m, rng.uniform_ext(), 300, hp.delta, i + 1);
          std::vector<std::size_t> naive;
          for (std::size_t n = 1; n <= o.length(); ++n) {
            if (is_hyperbolic_time(o, n, hp)) naive.push_back(n);
          }
          CHECK(hyperbolic_times_fast(o, hp) == naive);
        }
      }
    }
  }

  TEST_CASE("shift property of hyperbolic times") {
    HyperbolicParams hp;
    hp.sigma = 0.9L;
    hp.delta = 0.1L;
    const MapSpec l = make_logistic();
    Rng rng(8);
    for (int i = 0; i < 10; ++i) CHECK(shift_property_check(iterate_orbit(l, rng.uniform_ext(), 150, 0.1L, i), hp));
  }

  TEST_CASE("doubling: every n is a 0.6-hyperbolic time and lambda = log 2") {
    HyperbolicParams hp;
    hp.sigma = 0.6L;
    const OrbitBuffer o = iterate_orbit(make_doubling(), 0.1234L, 500, 1, 2);
    CHECK(hyperbolic_times_fast(o, hp).size() == 500);
    CHECK(std::fabs(birkhoff_log_inv(o) + std::log(2.0L)) < 1e-12L);
    CHECK(frequency_estimate({o}, hp) == 1);
  }

  TEST_CASE("doubling pre-balls have radius delta1 2^-n") {
    HyperbolicParams hp;
    hp.sigma = 0.6L;
    const MapSpec d = make_doubling();
    const OrbitBuffer o = iterate_orbit(d, 0.377L, 60, 1, 4);
    for (std::size_t n : {1, 2, 10, 33}) {
      const PreBall pb = build_preball(d, o, n, 0.3L, hp);
      CHECK(std::fabs(pb.v_n.length() - 0.6L * std::ldexp(1.0L, -int(n))) < 1e-15L);
      CHECK(pb.v_n.contains(o.points[0]));
      CHECK(pb.path.size() == n);
      const auto back = pull_point_along(d, pb.path, pb.image_ball.mid());
      CHECK(std::fabs(back.front() - o.points[0]) < 1e-12L);
      CHECK(distortion_along(d, pb, 50) == doctest::Approx(0).epsilon(1e-9));
    }
  }

  TEST_CASE("logistic pre-balls respect the critical margin") {
    const MapSpec l = make_logistic();
    HyperbolicParams hp;
    hp.sigma = 0.8L;
    hp.delta = 0.05L;
    hp.b = 0.3L;
    const OrbitBuffer o = iterate_orbit(l, 0.2L, 200, hp.delta, 1);
    std::size_t built = 0;
    for (std::size_t n : hyperbolic_times_fast(o, hp)) {
      if (n > 40) break;
      try {
        const PreBall pb = build_preball(l, o, n, 0.01L, hp);
        CHECK(critical_margin(l, pb, hp, 16) >= 1);
        ++built;
      } catch (const Error& e) {
        CHECK(e.kind() != ErrorKind::Numeric);
      }
    }
    CHECK(built > 0);
  }

  TEST_CASE("parameter validation") {
    HyperbolicParams hp;
    hp.sigma = 1.2L;
    CHECK_THROWS_AS(hp.validate(), Error);
    hp.sigma = 0.5L;
    hp.delta = 0;
    CHECK_THROWS_AS(hp.validate(), Error);
    hp.delta = 0.1L;
    CHECK_NOTHROW(hp.validate());
    CHECK_THROWS_AS(is_hyperbolic_time(iterate_orbit(make_tent(), 0.3L, 10, 1), 11, hp), Error);
  }

  TEST_CASE("NUE report on the logistic map") {
    const MapSpec l = make_logistic();
    std::vector<OrbitBuffer> orbits;
    Rng rng(2);
    for (int i = 0; i < 8; ++i) orbits.push_back(iterate_orbit(l, rng.uniform_ext(), 20000, 1, i + 1));
    const NueReport r = nue_report(l, orbits, {0.1L, 0.01L, 0.001L});
    CHECK(r.lambda_hat == doctest::Approx(std::log(2.0)).epsilon(0.02));
    CHECK(r.passed);
    REQUIRE(r.sr_curve.size() == 3);
    CHECK(r.sr_curve[2].second <= r.sr_curve[0].second);
    const HyperbolicParams hp = calibrate_params(l, r);
    CHECK(hp.sigma < 1);
  }

  TEST_CASE("reference doubling parameters") { CHECK(fixture::doubling().analysis.params.sigma < 1); }
}
