#include <cmath>

#include "doctest.h"
#include "gmy/intervals.hpp"

using namespace gmy;

namespace {

IntervalSet random_set(Rng& rng, std::size_t k) {
  std::vector<Interval> v;
  for (std::size_t i = 0; i < k; ++i) {
    const Real a = rng.uniform_ext(), w = rng.uniform_ext() * 0.2L;
    v.push_back({a, std::min<Real>(1, a + w)});
  }
  return IntervalSet(v);
}

}  // namespace

TEST_SUITE("intervals") {
  TEST_CASE("normalization merges and sorts") {
    const IntervalSet s({{0.5L, 0.7L}, {0.1L, 0.2L}, {0.15L, 0.3L}});
    REQUIRE(s.size() == 2);
    CHECK(s.components()[0] == Interval{0.1L, 0.3L});
    CHECK(s.measure() == doctest::Approx(0.4));
    CHECK(s.contains(0.25L));
    CHECK_FALSE(s.contains(0.4L));
    CHECK(s.contains(Interval{0.55L, 0.65L}));
    CHECK_FALSE(s.contains(Interval{0.25L, 0.55L}));
  }

  TEST_CASE("set algebra identities on random sets") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      const IntervalSet a = random_set(rng, 6), b = random_set(rng, 6);
      const Real ua = set_union(a, b).measure();
      const Real ia = set_intersect(a, b).measure();
      CHECK(ua + ia == doctest::Approx(static_cast<double>(a.measure() + b.measure())).epsilon(1e-9));
      CHECK(set_subtract(a, b).measure() + ia == doctest::Approx(static_cast<double>(a.measure())).epsilon(1e-9));
      CHECK(set_intersect(set_subtract(a, b), b).measure() < 1e-11L);
    }
  }

  TEST_CASE("circle arcs through 0") {
    const IntervalSet arc = IntervalSet::single({0.9L, 1.2L}, true);
    CHECK(arc.measure() == doctest::Approx(0.3));
    CHECK(arc.contains(0.05L));
    CHECK(arc.contains(0.95L));
    CHECK_FALSE(arc.contains(0.5L));
    const auto lin = arc.linear_components();
    REQUIRE(lin.size() == 2);
    CHECK(lin[0].lo == 0);
    CHECK(lin[1].hi == 1);
  }

  TEST_CASE("clip and sampling") {
    const IntervalSet s({{0.0L, 0.2L}, {0.4L, 0.6L}});
    CHECK(clip(s, {0.1L, 0.5L}).measure() == doctest::Approx(0.2));
    const auto pts = sample(s, 1000, 9);
    REQUIRE(pts.size() == 1000);
    std::size_t left = 0;
    for (Real x : pts) {
      CHECK(s.contains(x));
      left += x < 0.3L;
    }
    CHECK(left > 400);
    CHECK(left < 600);
    CHECK(sample(s, 10, 9) == sample(s, 10, 9));
  }
}
