#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "gmy/verify.hpp"

using namespace gmy;

TEST_SUITE("verify") {
  TEST_CASE("reference doubling partition is a GMY structure") {
    const auto& f = fixture::doubling();
    const GmyReport g = check_gmy(f.spec, f.partition, 8);
    CHECK(g.verified());
    CHECK(g.failures.empty());
    CHECK(g.kappa_hat == std::ldexp(1.0L, -int(g.min_R)));
    CHECK(g.K_hat == doctest::Approx(0));
  }

  TEST_CASE("a wrong return time is reported") {
    auto P = fixture::doubling().partition;
    P.elements[3].R += 1;
    const GmyReport g = check_gmy(fixture::doubling().spec, P, 4);
    CHECK_FALSE(g.full_branch_ok);
    REQUIRE(g.failures.size() == 1);
    CHECK(g.failures[0] == 3);
    InducedPartition empty;
    CHECK_THROWS_AS(check_gmy(fixture::doubling().spec, empty), Error);
  }

  TEST_CASE("satellite partial sums") {
    const auto& P = fixture::doubling().partition;
    const SummabilityReport s = satellite_summability(P, 5);
    REQUIRE(s.partial_sums.size() == P.ledger.steps.size());
    for (std::size_t i = 1; i < s.partial_sums.size(); ++i) CHECK(s.partial_sums[i] >= s.partial_sums[i - 1]);
    const std::size_t k = s.partial_sums.size();
    CHECK(s.tail_spread == doctest::Approx(static_cast<double>(s.partial_sums[k - 1] - s.partial_sums[k - 5])));
    CHECK_THROWS_AS(satellite_summability(P, P.ledger.steps.size() + 1), Error);
  }

  TEST_CASE("economy ratios") {
    const EconomyReport e = preball_economy(fixture::doubling().partition);
    CHECK(e.max_single >= 1);
    CHECK(e.max_ratio >= e.max_single - 1e-9L);
    CHECK(e.max_sharing >= 1);
  }

  TEST_CASE("orbit counters are monotone in n") {
    const auto& f = fixture::doubling();
    OrbitOptions o;
    o.horizons = {10, 100, 500, 1000, 2000};
    const OrbitCounters c = orbit_counters(f.spec, f.partition, f.partition.params, 0.3L, 2000, o);
    REQUIRE(c.trace.size() == 5);
    for (std::size_t i = 1; i < c.trace.size(); ++i) {
      CHECK(c.trace[i].H >= c.trace[i - 1].H);
      CHECK(c.trace[i].R >= c.trace[i - 1].R);
      CHECK(c.trace[i].S >= c.trace[i - 1].S);
    }
    CHECK(c.trace.back().R > 0);
    CHECK(c.trace.back().R <= c.trace.back().n);
  }

  TEST_CASE("R = 1 fixture: all integrability estimates equal 1") {
    const InducedPartition P = fixture::unit_return();
    const MapSpec d = make_doubling();
    const DensityEstimate nu = fixture::bumpy(64, 2);
    std::vector<OrbitCounters> counters;
    for (Real x : {0.11L, 0.52L, 0.93L}) counters.push_back(orbit_counters(d, P, P.params, x, 1000));
    for (const auto& c : counters) CHECK(c.trace.back().R == 1000);
    const IntegrabilityReport r = integrability_check(P, nu, counters);
    CHECK(r.element_sum == doctest::Approx(1));
    CHECK(r.birkhoff == doctest::Approx(1));
    CHECK(r.lebesgue_tail == doctest::Approx(1));
    CHECK(r.lebesgue_mean == doctest::Approx(1));
    CHECK(r.consistent);
  }

  TEST_CASE("tail sum equals the Lebesgue mean of R") {
    const auto& f = fixture::doubling();
    UlamOptions uo;
    uo.bins = 64;
    uo.samples_per_bin = 100;
    const DensityEstimate nu = ulam_density(f.spec, f.partition, uo);
    const IntegrabilityReport r = integrability_check(f.partition, nu, {}, 0);
    CHECK(r.tail_identity_error < 1e-9L);
    CHECK(r.lebesgue_tail == doctest::Approx(static_cast<double>(r.lebesgue_mean)).epsilon(1e-9));
    CHECK_THROWS_AS(integrability_check(f.partition, nu, {}, 1.0L), Error);
  }

  TEST_CASE("Abramov on the R = 1 fixture") {
    const InducedPartition P = fixture::unit_return();
    AbramovOptions o;
    o.orbits = 4;
    o.length = 2000;
    const AbramovReport a = abramov_check(make_doubling(), P, fixture::bumpy(64, 3), std::log(2.0L), o);
    CHECK(a.lambda_F == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(a.relative_error < 1e-9L);
    CHECK(a.passed);
  }

  TEST_CASE("density sampling stays in the support") {
    const auto pts = sample_density(fixture::bumpy(16, 5), 500, 1);
    CHECK(pts.size() == 500);
    for (Real x : pts) {
      CHECK(x >= 0);
      CHECK(x <= 1);
    }
  }
}
