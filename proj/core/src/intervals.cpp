#include "gmy/intervals.hpp"

#include <algorithm>
#include <cmath>

namespace gmy {

namespace {

std::vector<Interval> merge_sorted(std::vector<Interval> v) {
  std::sort(v.begin(), v.end(), [](const Interval& l, const Interval& r) {
    return l.lo < r.lo || (l.lo == r.lo && l.hi < r.hi);
  });
  std::vector<Interval> out;
  out.reserve(v.size());
  for (const Interval& iv : v) {
    if (!out.empty() && iv.lo <= out.back().hi + kGeomEpsilon) {
      out.back().hi = std::max(out.back().hi, iv.hi);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

// Splits lifted arcs into pieces of [0,1].
std::vector<Interval> unwrap(const std::vector<Interval>& comps) {
  std::vector<Interval> out;
  out.reserve(comps.size() + 2);
  for (Interval iv : comps) {
    if (iv.length() >= 1) {
      out.push_back({0, 1});
      continue;
    }
    const Real k = std::floor(iv.lo);
    iv = iv.shifted(-k);
    if (iv.hi > 1) {
      out.push_back({iv.lo, 1});
      out.push_back({0, iv.hi - 1});
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

}  // namespace

IntervalSet::IntervalSet(std::vector<Interval> components, bool wrap) : wrap_(wrap) {
  for (const Interval& iv : components) {
    if (!(iv.lo <= iv.hi)) throw Error(ErrorKind::Domain, "interval with lo > hi");
  }
  if (!wrap_) {
    components_ = merge_sorted(std::move(components));
    return;
  }
  auto merged = merge_sorted(unwrap(components));
  if (merged.size() >= 2 && merged.front().lo <= kGeomEpsilon && merged.back().hi >= 1 - kGeomEpsilon) {
    Interval head = merged.front();
    merged.erase(merged.begin());
    merged.back().hi = 1 + head.hi;
  }
  components_ = std::move(merged);
}

Real IntervalSet::measure() const {
  Real m = 0;
  for (const Interval& iv : components_) m += iv.length();
  return m;
}

std::vector<Interval> IntervalSet::linear_components() const {
  if (!wrap_) return components_;
  auto v = unwrap(components_);
  return merge_sorted(std::move(v));
}

bool IntervalSet::contains(Real x) const {
  if (wrap_) x -= std::floor(x);
  for (Real s : {Real(0), Real(1)}) {
    const Real y = x + s;
    auto it = std::upper_bound(components_.begin(), components_.end(), y,
                               [](Real v, const Interval& c) { return v < c.lo; });
    if (it != components_.begin() && std::prev(it)->contains(y)) return true;
    if (!wrap_) break;
  }
  return false;
}

bool IntervalSet::contains(const Interval& iv, Real slack) const {
  auto it = std::upper_bound(components_.begin(), components_.end(), iv.lo + slack,
                             [](Real v, const Interval& c) { return v < c.lo; });
  if (it == components_.begin()) return false;
  return std::prev(it)->contains(iv, slack);
}

bool IntervalSet::intersects(const Interval& iv) const {
  auto it = std::upper_bound(components_.begin(), components_.end(), iv.hi,
                             [](Real v, const Interval& c) { return v < c.lo; });
  while (it != components_.begin()) {
    --it;
    if (it->overlaps(iv)) return true;
    if (it->hi < iv.lo) break;
  }
  return false;
}

IntervalSet set_union(const IntervalSet& a, const IntervalSet& b) {
  if (a.wrap() != b.wrap()) throw Error(ErrorKind::Mode, "union of circle and interval sets");
  std::vector<Interval> all = a.components();
  all.insert(all.end(), b.components().begin(), b.components().end());
  return IntervalSet(std::move(all), a.wrap());
}

IntervalSet set_subtract(const IntervalSet& a, const IntervalSet& b) {
  if (a.wrap() != b.wrap()) throw Error(ErrorKind::Mode, "difference of circle and interval sets");
  const auto av = a.linear_components();
  const auto bv = b.linear_components();
  std::vector<Interval> out;
  std::size_t j = 0;
  for (const Interval& iv : av) {
    Real cur = iv.lo;
    while (j < bv.size() && bv[j].hi <= cur) ++j;
    std::size_t k = j;
    while (k < bv.size() && bv[k].lo < iv.hi) {
      if (bv[k].lo - cur > kGeomEpsilon) out.push_back({cur, bv[k].lo});
      cur = std::max(cur, bv[k].hi);
      if (bv[k].hi > iv.hi) break;
      ++k;
    }
    if (iv.hi - cur > kGeomEpsilon) out.push_back({cur, iv.hi});
  }
  return IntervalSet(std::move(out), a.wrap());
}

IntervalSet set_intersect(const IntervalSet& a, const IntervalSet& b) {
  if (a.wrap() != b.wrap()) throw Error(ErrorKind::Mode, "intersection of circle and interval sets");
  const auto av = a.linear_components();
  const auto bv = b.linear_components();
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < av.size() && j < bv.size()) {
    const Real lo = std::max(av[i].lo, bv[j].lo);
    const Real hi = std::min(av[i].hi, bv[j].hi);
    if (hi - lo > kGeomEpsilon) out.push_back({lo, hi});
    if (av[i].hi < bv[j].hi) ++i; else ++j;
  }
  return IntervalSet(std::move(out), a.wrap());
}

IntervalSet clip(const IntervalSet& a, const Interval& window) {
  if (a.wrap()) return set_intersect(a, IntervalSet::single(window, true));
  const auto& c = a.components();
  auto it = std::upper_bound(c.begin(), c.end(), window.lo,
                             [](Real v, const Interval& iv) { return v < iv.lo; });
  if (it != c.begin()) --it;
  std::vector<Interval> out;
  for (; it != c.end() && it->lo < window.hi; ++it) {
    const Real lo = std::max(it->lo, window.lo);
    const Real hi = std::min(it->hi, window.hi);
    if (hi - lo > kGeomEpsilon) out.push_back({lo, hi});
  }
  return IntervalSet(std::move(out), false);
}

std::vector<Real> sample(const IntervalSet& a, std::size_t k, std::uint64_t seed) {
  const Real total = a.measure();
  if (!(total > 0)) throw Error(ErrorKind::EmptySet, "cannot sample a set of measure zero");
  const auto& comps = a.components();
  std::vector<Real> cumulative(comps.size());
  Real acc = 0;
  for (std::size_t i = 0; i < comps.size(); ++i) cumulative[i] = (acc += comps[i].length());
  Rng rng(seed, 0x73616d706cULL);
  std::vector<Real> out;
  out.reserve(k);
  for (std::size_t s = 0; s < k; ++s) {
    const Real u = rng.uniform_ext() * total;
    std::size_t idx = static_cast<std::size_t>(
        std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    idx = std::min(idx, comps.size() - 1);
    const Real before = idx == 0 ? 0 : cumulative[idx - 1];
    Real x = comps[idx].lo + (u - before);
    x = std::clamp(x, comps[idx].lo, comps[idx].hi);
    if (a.wrap()) x -= std::floor(x);
    out.push_back(x);
  }
  return out;
}

}  // namespace gmy
