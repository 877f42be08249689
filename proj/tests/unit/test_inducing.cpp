#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "gmy/inducing.hpp"

using namespace gmy;

TEST_SUITE("inducing") {
  TEST_CASE("preimage sets and gaps") {
    const MapSpec d = make_doubling();
    const auto pts = preimage_set(d, 0.375L, 3);
    CHECK(pts.size() == 1 + 2 + 4 + 8);
    CHECK(std::is_sorted(pts.begin(), pts.end()));
    for (Real x : pts) {
      bool hits = false;
      for (std::size_t k = 0; k <= 3; ++k) hits = hits || std::fabs(forward(d, x, k) - 0.375L) < 1e-15L;
      CHECK(hits);
    }
    CHECK(max_gap(d, {0.1L, 0.3L, 0.9L}) == doctest::Approx(0.6));
  }

  TEST_CASE("base ball of the doubling reference") {
    const BaseDomain& b = fixture::doubling().analysis.base;
    CHECK(b.Delta == Interval{0.25L, 0.5L});
    CHECK(b.DeltaPrime.contains(b.Delta));
    CHECK(b.N0 >= 1);
    CHECK(b.max_gap <= b.delta1 / 4);
  }

  TEST_CASE("connector entries map onto Delta'") {
    const auto& f = fixture::doubling();
    const ConnectorTree t = build_connector_tree(f.spec, f.analysis.base);
    REQUIRE(!t.entries.empty());
    CHECK(t.K0 >= 1);
    for (const ConnectorEntry& e : t.entries) {
      CHECK(e.V.contains(e.D, 1e-15L));
      const Real a = forward(f.spec, e.D.lo, e.m), b = forward(f.spec, e.D.hi, e.m);
      const Real lo = std::min(a, b), hi = std::max(a, b);
      CHECK(std::fabs(lo - f.analysis.base.Delta.lo) < 1e-12L);
      CHECK(std::fabs(hi - f.analysis.base.Delta.hi) < 1e-12L);
    }
  }

  TEST_CASE("partition invariants") {
    const auto& f = fixture::doubling();
    const InducedPartition& P = f.partition;
    const Interval D = P.base.Delta;
    REQUIRE(!P.elements.empty());
    std::vector<Interval> us;
    Real covered = 0;
    for (const PartitionElement& e : P.elements) {
      CHECK(D.contains(e.U, 1e-15L));
      CHECK(e.R == e.n + e.m);
      CHECK(e.n >= P.n0);
      CHECK(e.preball.v_n.contains(e.U, 1e-15L));
      const Real a = forward(f.spec, e.U.lo, e.R), b = forward(f.spec, e.U.hi, e.R);
      CHECK(std::fabs(std::min(a, b) - D.lo) < 1e-9L);
      CHECK(std::fabs(std::max(a, b) - D.hi) < 1e-9L);
      us.push_back(e.U);
      covered += e.U.length();
    }
    std::sort(us.begin(), us.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    for (std::size_t i = 1; i < us.size(); ++i) CHECK(us[i - 1].hi <= us[i].lo + 1e-15L);
    CHECK(covered + P.remainder.measure() == doctest::Approx(static_cast<double>(D.length())).epsilon(1e-9));
    CHECK(std::is_sorted(P.leftover.rbegin(), P.leftover.rend()));
    CHECK(P.covered_fraction() == doctest::Approx(static_cast<double>(covered / D.length())));
  }

  TEST_CASE("locate finds the element containing a point") {
    const InducedPartition& P = fixture::doubling().partition;
    for (std::size_t i = 0; i < P.elements.size(); i += 7) {
      const auto at = P.locate(P.elements[i].U.mid());
      REQUIRE(at);
      CHECK(*at == i);
    }
    CHECK_FALSE(P.locate(0.9L));
  }

  TEST_CASE("satellite ledger") {
    const InducedPartition& P = fixture::doubling().partition;
    REQUIRE(!P.ledger.steps.empty());
    for (const SatelliteStep& s : P.ledger.steps) {
      CHECK(s.measure >= 0);
      CHECK(s.measure == doctest::Approx(static_cast<double>(s.S.measure())));
      CHECK(s.selected <= s.candidates);
    }
  }

  TEST_CASE("default n0") {
    CHECK(default_n0(1, 0.5L, 1) == 3);
    CHECK(default_n0(4, 0.5L, 1) >= default_n0(1, 0.5L, 1));
    const Real K0 = 10, s = 0.7L;
    const std::size_t n0 = default_n0(K0, s, 4);
    CHECK(K0 * std::pow(s, (static_cast<Real>(n0) - 4) / 2) <= 0.5L);
  }

  TEST_CASE("step centres fill every component") {
    const IntervalSet r({{0.0L, 0.1L}, {0.5L, 0.5001L}});
    const auto c = step_centers(r, 0.01L, 2);
    std::size_t second = 0;
    for (Real x : c) {
      CHECK(r.contains(x));
      second += x >= 0.5L;
    }
    CHECK(second >= 2);
  }

  TEST_CASE("forward reduces circle iterates") {
    const MapSpec d = make_doubling();
    CHECK(forward(d, 0.3L, 0) == 0.3L);
    CHECK(forward(d, 0.3L, 3) == doctest::Approx(0.4));
    const Real y = forward(make_manneville_pomeau(0.5L), 0.7L, 50);
    CHECK(y >= 0);
    CHECK(y < 1);
  }
}
