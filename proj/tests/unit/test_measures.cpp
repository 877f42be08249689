#include <cfloat>
#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "gmy/measures.hpp"

using namespace gmy;

TEST_SUITE("measures") {
  TEST_CASE("stationary vector of a two-state chain") {
    const TransitionRows rows = {{{0, 0.5L}, {1, 0.5L}}, {{0, 0.25L}, {1, 0.75L}}};
    const auto pi = stationary_vector(rows, 1e-14L, 10000);
    CHECK(pi[0] == doctest::Approx(1.0 / 3).epsilon(1e-10));
    CHECK(pi[1] == doctest::Approx(2.0 / 3).epsilon(1e-10));
  }

  TEST_CASE("exact Ulam rows give the Lebesgue density for affine maps") {
    for (const char* name : {"doubling", "tent"}) {
      const DensityEstimate u = exact_linear_ulam(make_builtin(name), 64);
      for (std::size_t i = 0; i < u.bins(); ++i) CHECK(u.density(i) == doctest::Approx(1).epsilon(1e-9));
    }
    CHECK_THROWS_AS(exact_linear_ulam(make_logistic(), 16), Error);
  }

  TEST_CASE("sampled Ulam on the logistic map against the arcsine law") {
    UlamOptions o;
    o.bins = 128;
    o.samples_per_bin = 400;
    const DensityEstimate u = ulam_density(make_logistic(), o);
    CHECK(u.total() == doctest::Approx(1));
    const DensityEstimate a = analytic_density("logistic", 128);
    CHECK(density_distance(u, a, {0.05L, 0.95L}) < 0.05L);
    CHECK(u.sweeps > 0);
  }

  TEST_CASE("analytic densities") {
    const DensityEstimate a = analytic_density("logistic", 100);
    CHECK(a.total() == doctest::Approx(1));
    CHECK(a.density(0) > a.density(50));
    CHECK(a.cdf(0.5L) == doctest::Approx(0.5));
    CHECK(analytic_density("doubling", 10).density(3) == doctest::Approx(1));
    CHECK_FALSE(analytic_cdf("manneville_pomeau"));
    CHECK_THROWS_AS(analytic_density("manneville_pomeau", 10), Error);
  }

  TEST_CASE("histogram geometry") {
    DensityEstimate d = fixture::bumpy(10, 1);
    CHECK(d.bin_of(0.05L) == 0);
    CHECK(d.bin_of(1) == 9);
    CHECK(d.cdf(1) == doctest::Approx(1));
    CHECK(d.mass({0.2L, 0.3L}) == doctest::Approx(static_cast<double>(d.weights[2])));
    CHECK_THROWS_AS(density_distance(d, fixture::bumpy(12, 1)), Error);
    CHECK(density_distance(d, d) == 0);
  }

  TEST_CASE("R = 1 fixture: the lift is nu bin for bin") {
    const InducedPartition P = fixture::unit_return();
    const DensityEstimate nu = fixture::bumpy(256, 4);
    LiftOptions lo;
    lo.bins = 256;
    lo.samples = 5000;
    const DensityEstimate mu = lift_measure(nu, P, make_doubling(), lo);
    for (std::size_t i = 0; i < nu.bins(); ++i) CHECK(std::fabs(mu.weights[i] - nu.weights[i]) <= 8 * LDBL_EPSILON);
    const MeanReturn m = mean_return_time(nu, P);
    CHECK(m.value == doctest::Approx(1));
    CHECK(m.remainder_mass == doctest::Approx(0));
  }

  TEST_CASE("lifting the reference doubling partition gives Lebesgue") {
    const auto& f = fixture::doubling();
    UlamOptions uo;
    uo.bins = 64;
    uo.samples_per_bin = 200;
    const DensityEstimate nu = ulam_density(f.spec, f.partition, uo);
    CHECK(nu.role == DensityRole::NuInduced);
    LiftOptions lo;
    lo.bins = 64;
    lo.samples = 50000;
    const DensityEstimate mu = lift_measure(nu, f.partition, f.spec, lo);
    CHECK(density_distance(mu, analytic_density("doubling", 64)) < 0.08L);
  }
}
