#include "gmy/inducing.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>

namespace gmy {

namespace {

std::uint64_t bits_of(Real x) {
  const double d = static_cast<double>(x);
  std::uint64_t u;
  std::memcpy(&u, &d, sizeof u);
  return u;
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  Rng r(a ^ (b * 0x9e3779b97f4a7c15ULL), b);
  return r.next();
}

Interval clip_to(const Interval& a, const Interval& w) { return {std::max(a.lo, w.lo), std::min(a.hi, w.hi)}; }

// Forward image of an interval under f^k. Circle endpoints are iterated on the
// lift and re-based each step, so the result keeps its length information.
Interval forward_interval(const MapSpec& spec, Interval I, std::size_t k) {
  if (spec.is_circle()) {
    for (std::size_t j = 0; j < k; ++j) {
      I = {spec.lift(I.lo), spec.lift(I.hi)};
      const Real s = std::floor(I.lo);
      I = I.shifted(-s);
    }
    return I;
  }
  Real a = I.lo, b = I.hi;
  for (std::size_t j = 0; j < k; ++j) {
    a = evaluate(spec, std::clamp<Real>(a, 0, 1));
    b = evaluate(spec, std::clamp<Real>(b, 0, 1));
  }
  return {std::min(a, b), std::max(a, b)};
}

}  // namespace

Real forward(const MapSpec& spec, Real x, std::size_t k) {
  for (std::size_t j = 0; j < k; ++j) {
    if (spec.is_circle()) {
      x = spec.lift(x);
      x -= std::floor(x);
    } else {
      x = evaluate(spec, x);
    }
  }
  return x;
}

std::optional<std::size_t> InducedPartition::locate(Real x) const {
  auto it = std::upper_bound(by_position.begin(), by_position.end(), x,
                             [&](Real v, std::size_t i) { return v < elements[i].U.lo; });
  if (it == by_position.begin()) return std::nullopt;
  const std::size_t idx = *std::prev(it);
  if (x <= elements[idx].U.hi) return idx;
  return std::nullopt;
}

Real InducedPartition::covered_fraction() const {
  const Real total = base.Delta.length();
  return total > 0 ? 1 - remainder.measure() / total : 0;
}

void InducedPartition::reindex() {
  by_position.resize(elements.size());
  for (std::size_t i = 0; i < elements.size(); ++i) by_position[i] = i;
  std::sort(by_position.begin(), by_position.end(),
            [&](std::size_t a, std::size_t b) { return elements[a].U.lo < elements[b].U.lo; });
}

std::vector<Real> preimage_set(const MapSpec& spec, Real p, std::size_t depth) {
  std::vector<Real> all{p};
  std::vector<Real> level{p};
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<Real> next;
    for (Real y : level) {
      for (Real q : spec.preimages(y)) next.push_back(q);
    }
    all.insert(all.end(), next.begin(), next.end());
    level = std::move(next);
  }
  std::sort(all.begin(), all.end());
  return all;
}

Real max_gap(const MapSpec& spec, const std::vector<Real>& pts) {
  if (pts.empty()) return 1;
  Real g = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) g = std::max(g, pts[i] - pts[i - 1]);
  if (spec.is_circle()) {
    g = std::max(g, pts.front() + 1 - pts.back());
  } else {
    g = std::max({g, pts.front(), 1 - pts.back()});
  }
  return g;
}

BaseDomain base_from_point(const MapSpec& spec, Real p, const BaseOptions& opt) {
  const Real delta1 = opt.delta1;
  if (!(delta1 > 0)) throw Error(ErrorKind::Config, "delta1 must be positive");
  Real delta0 = opt.delta0 > 0 ? opt.delta0 : delta1 / 20;
  if (opt.dyadic_bits > 0) {
    const Real q = std::ldexp(Real(1), static_cast<int>(opt.dyadic_bits));
    p = std::round(p * q) / q;
    delta0 = std::floor(delta0 * q) / q;
    if (!(delta0 > 0)) throw Error(ErrorKind::Config, "delta0 vanishes on the dyadic grid");
  }
  if (opt.strict_delta0 && delta0 > delta1 / 20 * (1 + 1e-12L)) {
    throw Error(ErrorKind::Config, "delta0 must not exceed delta1/20");
  }
  if (!(2 * delta0 < delta1)) throw Error(ErrorKind::Config, "Delta' must be smaller than the delta1-balls");
  BaseDomain base;
  base.p = p;
  base.delta1 = delta1;
  base.delta0 = delta0;
  base.Delta = {p - delta0, p + delta0};
  base.DeltaPrime = {p - 2 * delta0, p + 2 * delta0};
  if (base.DeltaPrime.lo <= 0 || base.DeltaPrime.hi >= 1) {
    throw Error(ErrorKind::SearchFailure, "Delta' around " + std::to_string(static_cast<double>(p)) +
                                              " leaves (0,1)");
  }
  const std::size_t depth_max = opt.depth_max;
  const Real eps = opt.critical_eps > 0 ? opt.critical_eps : 1e-9L;
  std::vector<Real> all{p};
  std::vector<Real> level{p};
  for (std::size_t d = 0;; ++d) {
    for (Real y : level) {
      if (!spec.critical_set().empty() && spec.dist_to_critical(y) < eps) {
        throw Error(ErrorKind::SearchFailure, "preimage of p at depth " + std::to_string(d) + " meets C");
      }
    }
    std::vector<Real> sorted = all;
    std::sort(sorted.begin(), sorted.end());
    base.max_gap = max_gap(spec, sorted);
    if (base.max_gap < delta1 / 4) {
      base.N0 = d;
      return base;
    }
    if (d == depth_max) break;
    std::vector<Real> next;
    for (Real y : level) {
      for (Real q : spec.preimages(y)) next.push_back(q);
    }
    all.insert(all.end(), next.begin(), next.end());
    level = std::move(next);
  }
  throw Error(ErrorKind::SearchFailure, "preimages of p not delta1/4-dense by depth " + std::to_string(depth_max) +
                                            " (largest gap " + std::to_string(static_cast<double>(base.max_gap)) + ")");
}

BaseDomain base_from_point(const MapSpec& spec, Real p, Real delta1, std::size_t depth_max) {
  BaseOptions opt;
  opt.delta1 = delta1;
  opt.depth_max = depth_max;
  return base_from_point(spec, p, opt);
}

BaseDomain find_base_point(const MapSpec& spec, const BaseOptions& opt) {
  std::optional<BaseDomain> best;
  Real densest = 1;
  for (std::size_t i = 0; i < opt.grid; ++i) {
    const Real p = (static_cast<Real>(i) + Real(0.5)) / static_cast<Real>(opt.grid);
    try {
      BaseDomain b = base_from_point(spec, p, opt);
      if (!best || b.N0 < best->N0) best = b;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SearchFailure) throw;
      try {
        densest = std::min(densest, max_gap(spec, preimage_set(spec, p, opt.depth_max)));
      } catch (const Error&) {
      }
    }
  }
  if (!best) {
    throw Error(ErrorKind::SearchFailure, "no base point found up to depth " + std::to_string(opt.depth_max) +
                                              "; densest gap " + std::to_string(static_cast<double>(densest)));
  }
  return *best;
}

BaseDomain find_base_point(const MapSpec& spec, Real delta1, std::size_t depth_max, std::size_t grid) {
  BaseOptions opt;
  opt.delta1 = delta1;
  opt.depth_max = depth_max;
  opt.grid = grid;
  return find_base_point(spec, opt);
}

ConnectorTree build_connector_tree(const MapSpec& spec, const BaseDomain& base, std::size_t depth) {
  ConnectorTree tree;
  tree.circle = spec.is_circle();
  tree.depth = depth == 0 ? base.N0 : std::max(depth, base.N0);
  std::vector<ConnectorEntry> level{{base.DeltaPrime, base.Delta, 0, {}}};
  std::vector<Real> level_points{base.p};
  tree.entries = level;
  for (std::size_t m = 1; m <= tree.depth; ++m) {
    std::vector<ConnectorEntry> next;
    std::vector<Real> next_points;
    for (std::size_t i = 0; i < level.size(); ++i) {
      for (Real q : spec.preimages(level_points[i])) {
        try {
          ConnectorEntry e;
          e.V = spec.pull_back(q, level[i].V);
          e.D = spec.pull_back(q, level[i].D);
          e.m = m;
          e.path.reserve(m);
          e.path.push_back(q);
          e.path.insert(e.path.end(), level[i].path.begin(), level[i].path.end());
          if (tree.circle) {
            const Real s = std::floor(e.D.lo);
            e.V = e.V.shifted(-s);
            e.D = e.D.shifted(-s);
          }
          next.push_back(std::move(e));
          next_points.push_back(q);
        } catch (const Error& err) {
          if (err.kind() == ErrorKind::Numeric) throw;
          ++tree.discarded;
        }
      }
    }
    tree.entries.insert(tree.entries.end(), next.begin(), next.end());
    level = std::move(next);
    level_points = std::move(next_points);
  }

  // Derivative and distortion bounds over the tree: endpoints and centre of Delta'.
  const Real probes[3] = {base.DeltaPrime.lo, base.p, base.DeltaPrime.hi};
  for (const auto& e : tree.entries) {
    if (e.m == 0) continue;
    Real logs[3];
    for (int s = 0; s < 3; ++s) {
      const auto pts = pull_point_along(spec, e.path, probes[s]);
      Real acc = 0;
      for (std::size_t j = 0; j < e.m; ++j) {
        const Real x = tree.circle ? spec.reduce(pts[j]) : pts[j];
        acc += std::log(std::fabs(spec.deriv_raw(x)));
        tree.K0 = std::max(tree.K0, std::exp(std::fabs(acc)));
      }
      logs[s] = acc;
    }
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        tree.D0 = std::max(tree.D0, std::fabs(logs[a] - logs[b]) / std::fabs(probes[a] - probes[b]));
      }
    }
  }
  std::stable_sort(tree.entries.begin(), tree.entries.end(), [](const ConnectorEntry& a, const ConnectorEntry& b) {
    return a.D.lo < b.D.lo || (a.D.lo == b.D.lo && a.m < b.m);
  });
  return tree;
}

namespace {

std::vector<Real> shifts_for(const ConnectorTree& tree) {
  if (tree.circle) return {-1, 0, 1, 2};
  return {0};
}

}  // namespace

Reach reach_delta(const ConnectorTree& tree, const Interval& ball) {
  std::optional<Reach> best;
  for (std::size_t i = 0; i < tree.entries.size(); ++i) {
    const auto& e = tree.entries[i];
    for (Real k : shifts_for(tree)) {
      const Interval V = e.V.shifted(k);
      if (V.lo < ball.lo || V.hi > ball.hi) continue;
      if (!best || e.m < best->m || (e.m == best->m && V.lo < best->V.lo)) {
        best = Reach{i, e.m, V, e.D.shifted(k)};
      }
    }
  }
  if (!best) throw Error(ErrorKind::Coverage, "no connector entry inside the hyperbolic ball");
  return *best;
}

std::vector<Reach> entries_within(const ConnectorTree& tree, const Interval& ball, const std::vector<Interval>& targets,
                                  Real slack) {
  std::vector<Reach> out;
  Real max_len = 0;
  for (const auto& e : tree.entries) max_len = std::max(max_len, e.D.length());
  const auto& E = tree.entries;
  for (Real k : shifts_for(tree)) {
    for (const Interval& t : targets) {
      const Real lo = t.lo - slack - max_len - k;
      const Real hi = t.hi + slack - k;
      auto first = std::lower_bound(E.begin(), E.end(), lo, [](const ConnectorEntry& e, Real v) { return e.D.lo < v; });
      for (auto it = first; it != E.end() && it->D.lo <= hi; ++it) {
        const Interval D = it->D.shifted(k);
        if (D.hi < t.lo - slack || D.lo > t.hi + slack) continue;
        const Interval V = it->V.shifted(k);
        if (V.lo < ball.lo || V.hi > ball.hi) continue;
        out.push_back(Reach{static_cast<std::size_t>(it - E.begin()), it->m, V, D});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Reach& a, const Reach& b) {
    return a.entry < b.entry || (a.entry == b.entry && a.V.lo < b.V.lo);
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Reach& a, const Reach& b) { return a.entry == b.entry && a.V.lo == b.V.lo; }),
            out.end());
  return out;
}

Interval candidate_from(const MapSpec& spec, const PreBall& preball, const Reach& reach) {
  return pull_back_along(spec, preball.path, reach.D);
}

Candidate candidate_set(const MapSpec& spec, const PreBall& preball, const ConnectorTree& tree) {
  const Reach r = reach_delta(tree, preball.image_ball);
  Candidate c;
  c.U = candidate_from(spec, preball, r);
  c.n = preball.n;
  c.m = r.m;
  c.entry = r.entry;
  return c;
}

std::vector<Real> step_centers(const IntervalSet& remaining, Real spacing, std::size_t min_per_component) {
  std::vector<Real> out;
  for (const Interval& c : remaining.linear_components()) {
    const Real len = c.length();
    std::size_t k = static_cast<std::size_t>(std::ceil(len / spacing - 1e-9L));
    k = std::max(k, min_per_component);
    for (std::size_t i = 0; i < k; ++i) {
      out.push_back(c.lo + (static_cast<Real>(i) + Real(0.5)) * len / static_cast<Real>(k));
    }
  }
  return out;
}

namespace {

struct CenterWork {
  bool hyperbolic = false;
  bool failed = false;
  PreBall preball;
  std::vector<Candidate> candidates;
};

CenterWork process_center(const MapSpec& spec, const ConnectorTree& tree, const InducingOptions& opt,
                          const InducedPartition& state, std::size_t n, Real z, std::size_t index) {
  CenterWork w;
  const OrbitBuffer orbit = iterate_orbit(spec, z, n, state.params.delta, mix(opt.seed, bits_of(z) ^ n));
  const auto times = hyperbolic_times_fast(orbit, state.params);
  if (times.empty() || times.back() != n) return w;
  w.hyperbolic = true;
  try {
    w.preball = build_preball(spec, orbit, n, state.base.delta1, state.params);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DeltaTooLarge && e.kind() != ErrorKind::HyperbolicityViolation) throw;
    w.failed = true;
    return w;
  }
  const Interval V = w.preball.v_n;
  const IntervalSet pieces = clip(state.remainder, V);
  // Forward images of Delta_{n-1} inside V_n, in ball coordinates.
  std::vector<Interval> targets;
  if (spec.is_circle()) {
    // Iterate each piece together with z so both share the same integer re-basing.
    for (const Interval& P : pieces.components()) {
      Interval pz = P;
      Real zz = orbit.points[0];
      for (std::size_t j = 0; j < n; ++j) {
        pz = {spec.lift(pz.lo), spec.lift(pz.hi)};
        zz = spec.lift(zz);
        const Real r = std::floor(zz);
        pz = pz.shifted(-r);
        zz -= r;
      }
      targets.push_back(pz.shifted(-std::round(zz - orbit.points[n])));
    }
  } else {
    for (const Interval& P : pieces.components()) targets.push_back(forward_interval(spec, P, n));
  }
  const Real slack = 1e-8L;
  const auto reaches = entries_within(tree, w.preball.image_ball, targets, slack);
  for (const Reach& r : reaches) {
    Candidate c;
    try {
      c.U = candidate_from(spec, w.preball, r);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Numeric) throw;
      continue;
    }
    if (!state.remainder.intersects(c.U)) continue;
    c.n = n;
    c.m = r.m;
    c.entry = r.entry;
    c.center = index;
    w.candidates.push_back(c);
  }
  if (w.candidates.empty()) {
    try {
      const Reach r = reach_delta(tree, w.preball.image_ball);
      Candidate c;
      c.U = candidate_from(spec, w.preball, r);
      c.n = n;
      c.m = r.m;
      c.entry = r.entry;
      c.center = index;
      w.candidates.push_back(c);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Numeric) throw;
    }
  }
  w.preball.path.clear();
  w.preball.path.shrink_to_fit();
  return w;
}

}  // namespace

void inducing_step(const MapSpec& spec, const ConnectorTree& tree, const InducingOptions& opt,
                   InducedPartition& state, std::size_t n, const std::vector<Real>& centers) {
  const Interval Delta = state.base.Delta;
  SatelliteStep step;
  step.n = n;
  step.centers = centers.size();

  // Hyperbolicity of every grid point, then a left-to-right cover by pre-balls.
  std::vector<CenterWork> work(centers.size());
  Interval inner{1, 0};
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (inner.contains(centers[i])) continue;
    work[i] = process_center(spec, tree, opt, state, n, centers[i], i);
    if (work[i].hyperbolic && !work[i].failed) {
      const Interval& V = work[i].preball.v_n;
      inner = {V.lo + V.length() / 4, V.hi - V.length() / 4};
    }
  }
  std::vector<Candidate> all;
  for (const auto& w : work) {
    if (w.hyperbolic) ++step.hyperbolic_centers;
    if (w.failed) ++step.failed_preballs;
    all.insert(all.end(), w.candidates.begin(), w.candidates.end());
  }
  step.candidates = all.size();
  std::sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) {
    if (a.U.lo != b.U.lo) return a.U.lo < b.U.lo;
    if (a.m != b.m) return a.m < b.m;
    return a.center < b.center;
  });

  // Greedy maximal disjoint family inside Delta_{n-1}.
  std::vector<Interval> accepted;
  Real frontier = -std::numeric_limits<Real>::infinity();
  const std::size_t first_new = state.elements.size();
  std::vector<char> used(centers.size(), 0);
  for (std::size_t ci = 0; ci < all.size(); ++ci) {
    const Candidate& c = all[ci];
    if (c.U.lo < frontier - kGeomEpsilon) continue;
    if (!state.remainder.contains(c.U, kGeomEpsilon)) continue;
    PartitionElement e;
    // Pre-balls of every centre offering the same set.
    std::vector<Interval> balls;
    std::vector<std::size_t> sharers;
    for (std::size_t cj = ci; cj < all.size() && all[cj].U.lo <= c.U.lo + kGeomEpsilon; ++cj) {
      if (std::fabs(all[cj].U.hi - c.U.hi) > kGeomEpsilon) continue;
      sharers.push_back(all[cj].center);
      balls.push_back(work[all[cj].center].preball.v_n);
    }
    std::sort(sharers.begin(), sharers.end());
    e.sharing = static_cast<std::size_t>(std::unique(sharers.begin(), sharers.end()) - sharers.begin());
    e.economy = IntervalSet(std::move(balls)).measure() / c.U.length();
    e.U = c.U;
    e.center = centers[c.center];
    e.n = n;
    e.m = c.m;
    e.R = n + c.m;
    e.preball = work[c.center].preball;
    state.elements.push_back(std::move(e));
    accepted.push_back(c.U);
    used[c.center] = 1;
    frontier = c.U.hi;
  }
  step.selected = state.elements.size() - first_new;
  state.reindex();

  // Satellites: for each unused centre, the elements (and Delta^c) its candidates meet.
  std::vector<Interval> outside;
  std::map<std::size_t, std::vector<Interval>> per_element;
  std::vector<Interval> global;
  auto overlapping = [&](const Interval& U, std::vector<std::size_t>& ids) {
    const auto& order = state.by_position;
    auto it = std::lower_bound(order.begin(), order.end(), U.hi,
                               [&](std::size_t i, Real v) { return state.elements[i].U.lo < v; });
    while (it != order.begin()) {
      --it;
      const Interval& E = state.elements[*it].U;
      if (E.hi <= U.lo) break;
      if (E.overlaps(U)) ids.push_back(*it);
    }
  };
  for (std::size_t i = 0; i < work.size(); ++i) {
    const auto& w = work[i];
    if (!w.hyperbolic || w.failed || used[i]) continue;
    const Interval VD = clip_to(w.preball.v_n, Delta);
    if (!(VD.length() > 0)) continue;
    bool out = false;
    std::vector<std::size_t> ids;
    for (const Candidate& c : w.candidates) {
      if (c.U.lo < Delta.lo - kGeomEpsilon || c.U.hi > Delta.hi + kGeomEpsilon) out = true;
      overlapping(c.U, ids);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (out) {
      outside.push_back(VD);
      global.push_back(VD);
    }
    for (std::size_t id : ids) {
      const Interval& U = state.elements[id].U;
      auto& bucket = per_element[id];
      if (VD.lo < U.lo) bucket.push_back({VD.lo, std::min(VD.hi, U.lo)});
      if (VD.hi > U.hi) bucket.push_back({std::max(VD.lo, U.hi), VD.hi});
    }
    if (ids.size() >= 2) {
      global.push_back(VD);
    } else if (ids.size() == 1) {
      const Interval& U = state.elements[ids[0]].U;
      if (VD.lo < U.lo) global.push_back({VD.lo, std::min(VD.hi, U.lo)});
      if (VD.hi > U.hi) global.push_back({std::max(VD.lo, U.hi), VD.hi});
    }
  }
  for (auto& [id, pieces] : per_element) {
    std::vector<Interval> valid;
    for (const auto& p : pieces) {
      if (p.hi > p.lo) valid.push_back(p);
    }
    step.per_element.emplace_back(id, IntervalSet(std::move(valid)).measure());
  }
  {
    std::vector<Interval> valid;
    for (const auto& p : global) {
      if (p.hi > p.lo) valid.push_back(p);
    }
    step.S = IntervalSet(std::move(valid));
  }
  step.measure = step.S.measure();
  step.measure_outside = IntervalSet(outside).measure();

  state.remainder = set_subtract(state.remainder, IntervalSet(accepted));
  step.leftover = state.remainder.measure();

  // Saturation: every pre-ball part in Delta lies in S_n or in an element.
  for (const auto& w : work) {
    if (!w.hyperbolic || w.failed) continue;
    const Interval VD = clip_to(w.preball.v_n, Delta);
    if (!(VD.length() > kGeomEpsilon)) continue;
    const IntervalSet open = clip(state.remainder, VD);
    if (open.empty()) continue;
    const IntervalSet rest = set_subtract(open, clip(step.S, VD));
    if (!rest.empty()) ++step.unsaturated;
  }

  state.leftover.push_back(step.leftover);
  state.ledger.steps.push_back(std::move(step));
  state.n_max = n;
}

std::size_t default_n0(Real K0, Real sigma, std::size_t N0, Real safety) {
  if (!(sigma > 0 && sigma < 1) || !(safety > 0)) throw Error(ErrorKind::Config, "need 0 < sigma < 1 and safety > 0");
  // K0 sigma^((n0 - N0)/2) <= safety  <=>  n0 >= N0 + 2 log(K0 / safety) / (-log sigma)
  const Real need = static_cast<Real>(N0) + 2 * std::log(K0 / safety) / -std::log(sigma);
  const Real n0 = std::ceil(need - 1e-12L);
  return static_cast<std::size_t>(std::max<Real>(n0, 1));
}

InducedPartition run_inducing(const MapSpec& spec, const BaseDomain& base, const HyperbolicParams& params,
                              const InducingOptions& options) {
  if (options.n0 == 0 || options.n_max < options.n0) throw Error(ErrorKind::Config, "need 1 <= n0 <= n_max");
  const ConnectorTree tree = build_connector_tree(spec, base, options.connector_depth);
  InducedPartition state;
  state.base = base;
  state.params = params;
  state.n0 = options.n0;
  state.n_max = options.n0;
  state.grid_spacing = base.Delta.length() / static_cast<Real>(std::max<std::size_t>(options.grid, 1));
  state.remainder = IntervalSet::single(base.Delta);
  state.K0 = tree.K0;
  state.D0 = tree.D0;
  state.connector_depth = tree.depth;
  for (std::size_t n = options.n0; n <= options.n_max; ++n) {
    if (state.remainder.empty()) break;
    const auto centers = step_centers(state.remainder, state.grid_spacing, options.min_centers);
    inducing_step(spec, tree, options, state, n, centers);
    if (state.remainder.measure() < options.stop_fraction * base.Delta.length()) break;
  }
  return state;
}

}  // namespace gmy
