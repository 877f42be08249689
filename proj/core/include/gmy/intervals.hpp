#pragma once

#include <cstdint>
#include <vector>

#include "gmy/common.hpp"

namespace gmy {

/// Finite union of closed intervals, normalized: components sorted, gaps
/// larger than kGeomEpsilon. With `wrap`, points live on the circle [0,1) and
/// an arc through 0 is stored as a single last component with hi > 1.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> components, bool wrap = false);
  static IntervalSet single(Interval iv, bool wrap = false) { return IntervalSet({iv}, wrap); }

  const std::vector<Interval>& components() const { return components_; }
  bool wrap() const { return wrap_; }
  bool empty() const { return components_.empty(); }
  std::size_t size() const { return components_.size(); }

  Real measure() const;
  bool contains(Real x) const;
  /// True if iv lies inside a single component (with `slack` tolerance).
  bool contains(const Interval& iv, Real slack = kGeomEpsilon) const;
  /// True if iv overlaps some component by more than kGeomEpsilon.
  bool intersects(const Interval& iv) const;

  /// Components split at 0 for circle sets (all inside [0,1]).
  std::vector<Interval> linear_components() const;

  IntervalSet normalized() const { return IntervalSet(components_, wrap_); }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> components_;
  bool wrap_ = false;
};

IntervalSet set_union(const IntervalSet& a, const IntervalSet& b);
IntervalSet set_subtract(const IntervalSet& a, const IntervalSet& b);
IntervalSet set_intersect(const IntervalSet& a, const IntervalSet& b);
/// a restricted to a window, touching only the components that meet it
/// (non-circle sets).
IntervalSet clip(const IntervalSet& a, const Interval& window);
inline Real measure(const IntervalSet& a) { return a.measure(); }

/// k i.i.d. uniform points on a, deterministic in seed.
std::vector<Real> sample(const IntervalSet& a, std::size_t k, std::uint64_t seed);

}  // namespace gmy
