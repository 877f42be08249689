#include "gmy/verify.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <map>

namespace gmy {

namespace {

Real circle_gap(Real a, Real b) {
  const Real d = a - b;
  return std::fabs(d - std::round(d));
}

Real point_gap(const MapSpec& spec, Real a, Real b) { return spec.is_circle() ? circle_gap(a, b) : std::fabs(a - b); }

// Distance of y from Delta (0 inside).
Real outside_by(const MapSpec& spec, const Interval& D, Real y) {
  if (spec.is_circle()) {
    y -= std::floor(y - D.lo);
    if (y <= D.hi) return 0;
    return std::min(y - D.hi, D.lo + 1 - y);
  }
  if (y < D.lo) return D.lo - y;
  if (y > D.hi) return y - D.hi;
  return 0;
}

struct Push {
  Real image = 0;
  Real inv = 1;  // 1 / |(f^R)'|
};

Push push(const MapSpec& spec, Real x, std::size_t R) {
  Push p;
  x = spec.is_circle() ? x - std::floor(x) : std::clamp<Real>(x, 0, 1);
  for (std::size_t j = 0; j < R; ++j) {
    p.inv *= inv_norm(spec, x);
    x = evaluate(spec, x);
  }
  p.image = x;
  return p;
}

constexpr Real kFloorCap = 0.01L;  // of |Delta|

// Delta pulled back along the orbit of the midpoint of U must give U again.
bool pulls_back_onto(const MapSpec& spec, const PartitionElement& e, const Interval& D) {
  std::vector<Real> path(e.R);
  Real x = e.U.mid();
  for (std::size_t j = 0; j < e.R; ++j) {
    x = spec.is_circle() ? x - std::floor(x) : x;
    path[j] = x;
    x = evaluate(spec, x);
  }
  try {
    Interval back = pull_back_along(spec, path, D);
    if (spec.is_circle()) back = back.shifted(std::floor(e.U.lo) - std::floor(back.lo));
    const Real slack = kForwardTolerance + 1e-6L * e.U.length();
    return std::fabs(back.lo - e.U.lo) <= slack && std::fabs(back.hi - e.U.hi) <= slack;
  } catch (const Error&) {
    return false;
  }
}

Real slope_fit(const std::vector<std::pair<Real, Real>>& pts) {
  if (pts.size() < 2) return 0;
  Real mx = 0, my = 0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<Real>(pts.size());
  my /= static_cast<Real>(pts.size());
  Real sxy = 0, sxx = 0;
  for (const auto& [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxx > 0 ? sxy / sxx : 0;
}

}  // namespace

bool GmyReport::verified() const { return kappa_hat < 1 && full_branch_ok && std::isfinite(K_hat); }

GmyReport check_gmy(const MapSpec& spec, const InducedPartition& partition, std::size_t samples_per_element,
                    std::uint64_t seed, unsigned workers) {
  if (partition.elements.empty()) throw Error(ErrorKind::EmptyPartition, "nothing to verify");
  const Interval D = partition.base.Delta;
  GmyReport rep;
  rep.elements.resize(partition.elements.size());
  parallel_for(partition.elements.size(), workers, [&](std::size_t i) {
    const PartitionElement& e = partition.elements[i];
    ElementCheck c;
    c.element = i;
    c.R = e.R;
    try {
      const Push a = push(spec, e.U.lo, e.R);
      const Push b = push(spec, e.U.hi, e.R);
      const Real straight = std::max(point_gap(spec, a.image, D.lo), point_gap(spec, b.image, D.hi));
      const Real crossed = std::max(point_gap(spec, a.image, D.hi), point_gap(spec, b.image, D.lo));
      c.forward_error = std::min(straight, crossed);
      c.tolerance = std::clamp<Real>(64 * LDBL_EPSILON / std::min(a.inv, b.inv), kForwardTolerance,
                                     kFloorCap * D.length());
      Real worst_inv = std::max(a.inv, b.inv);
      bool inside = true;
      std::vector<Push> s;
      Rng rng(seed, i);
      const std::size_t k = samples_per_element;
      for (std::size_t j = 0; j < k; ++j) {
        const Real t = (static_cast<Real>(j) + rng.uniform_ext()) / static_cast<Real>(k);
        const Push q = push(spec, e.U.lo + t * e.U.length(), e.R);
        worst_inv = std::max(worst_inv, q.inv);
        if (outside_by(spec, D, q.image) > c.tolerance) inside = false;
        s.push_back(q);
      }
      c.min_expansion = 1 / worst_inv;
      for (std::size_t x = 0; x < s.size(); ++x) {
        for (std::size_t y = x + 1; y < s.size(); ++y) {
          const Real gap = point_gap(spec, s[x].image, s[y].image);
          if (gap < 1e-7L) continue;
          const Real dl = std::fabs(std::log(s[x].inv) - std::log(s[y].inv));
          c.distortion = std::max(c.distortion, dl / gap);
        }
      }
      c.full_branch = inside && c.forward_error <= c.tolerance;
      if (c.full_branch && c.forward_error > kForwardTolerance) c.full_branch = pulls_back_onto(spec, e, D);
    } catch (const Error&) {
      c.full_branch = false;
      c.forward_error = std::numeric_limits<Real>::infinity();
    }
    rep.elements[i] = c;
  });
  rep.full_branch_ok = true;
  rep.min_R = std::numeric_limits<std::size_t>::max();
  for (const ElementCheck& c : rep.elements) {
    if (!c.full_branch) {
      rep.full_branch_ok = false;
      rep.failures.push_back(c.element);
    }
    rep.kappa_hat = std::max(rep.kappa_hat, c.min_expansion > 0 ? 1 / c.min_expansion
                                                                : std::numeric_limits<Real>::infinity());
    rep.K_hat = std::max(rep.K_hat, c.distortion);
    rep.max_forward_error = std::max(rep.max_forward_error, c.forward_error);
    rep.min_R = std::min(rep.min_R, c.R);
  }
  const Real expo = (static_cast<Real>(partition.n0) - static_cast<Real>(partition.base.N0)) / 2;
  rep.kappa_target = partition.K0 * std::pow(partition.params.sigma, expo);
  return rep;
}

SummabilityReport satellite_summability(const InducedPartition& partition, std::size_t window, Real tolerance) {
  const auto& steps = partition.ledger.steps;
  if (window < 2 || steps.size() < window) {
    throw Error(ErrorKind::Shape, "need at least " + std::to_string(window) + " recorded steps");
  }
  SummabilityReport r;
  r.window = window;
  r.tolerance = tolerance;
  Real acc = 0;
  std::vector<std::pair<Real, Real>> logs;
  std::map<std::size_t, std::vector<std::pair<Real, Real>>> groups;
  for (const SatelliteStep& s : steps) {
    r.steps.push_back(s.n);
    r.measures.push_back(s.measure);
    r.partial_sums.push_back(acc += s.measure);
    if (s.measure > 0) logs.emplace_back(static_cast<Real>(s.n), std::log(s.measure));
    for (const auto& [id, m] : s.per_element) {
      if (!(m > 0) || id >= partition.elements.size()) continue;
      const Real lag = static_cast<Real>(s.n) - static_cast<Real>(partition.elements[id].n);
      groups[id].emplace_back(lag, std::log(m));
    }
  }
  r.tail_spread = r.partial_sums.back() - r.partial_sums[r.partial_sums.size() - window];
  r.cauchy = r.tail_spread < tolerance;
  r.decay_rate = slope_fit(logs);
  Real sxy = 0, sxx = 0;
  for (const auto& [id, pts] : groups) {
    if (pts.size() < 2) continue;
    Real mx = 0, my = 0;
    for (const auto& [x, y] : pts) {
      mx += x;
      my += y;
    }
    mx /= static_cast<Real>(pts.size());
    my /= static_cast<Real>(pts.size());
    for (const auto& [x, y] : pts) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    r.per_u_points += pts.size();
    ++r.per_u_groups;
  }
  r.per_u_slope = sxx > 0 ? sxy / sxx : 0;
  r.per_u_bound = std::log(partition.params.sigma) / 2;
  return r;
}

EconomyReport preball_economy(const InducedPartition& partition) {
  EconomyReport r;
  std::map<std::size_t, Real> by_step;
  for (const PartitionElement& e : partition.elements) {
    Real& slot = by_step[e.n];
    slot = std::max(slot, e.economy);
    r.max_ratio = std::max(r.max_ratio, e.economy);
    if (e.U.length() > 0) r.max_single = std::max(r.max_single, e.preball.v_n.length() / e.U.length());
    r.max_sharing = std::max(r.max_sharing, e.sharing);
  }
  r.per_step.assign(by_step.begin(), by_step.end());
  return r;
}

Real OrbitCounters::min_key_ratio() const {
  Real best = std::numeric_limits<Real>::infinity();
  for (const CounterSample& s : trace) {
    if (s.H == 0) continue;
    best = std::min(best, static_cast<Real>(s.R + s.S) / static_cast<Real>(s.H));
  }
  return std::isfinite(best) ? best : 0;
}

OrbitCounters orbit_counters(const MapSpec& spec, const InducedPartition& partition, const HyperbolicParams& params,
                             Real x0, std::size_t n, const OrbitOptions& options) {
  if (partition.elements.empty()) throw Error(ErrorKind::EmptyPartition, "no elements to follow");
  OrbitCounters out;
  out.x0 = x0;
  const OrbitBuffer orbit = iterate_orbit(spec, x0, n, params.delta, options.seed);
  const auto times = hyperbolic_times_fast(orbit, params);

  std::map<std::size_t, const IntervalSet*> sat;
  for (const SatelliteStep& s : partition.ledger.steps) sat[s.n] = &s.S;

  std::vector<std::size_t> done;                         // completion times
  std::vector<std::pair<std::size_t, std::size_t>> hits;  // (start time, satellite count)
  std::size_t t = 0;
  bool expecting = false;
  while (t < n) {
    const Real y = orbit.points[t];
    const auto e = partition.locate(y);
    if (!e) {
      if (expecting || t == 0) {
        ++out.remainder_hits;
        if (!options.reenter) {
          out.truncated = true;
          out.truncated_at = t;
          break;
        }
      }
      expecting = false;
      ++t;
      continue;
    }
    const PartitionElement& el = partition.elements[*e];
    if (t + el.R > n) break;
    std::size_t s = 0;
    for (auto it = sat.lower_bound(partition.n0); it != sat.end() && it->first < el.n; ++it) {
      if (it->second->contains(y)) ++s;
    }
    hits.emplace_back(t, s);
    Real logd = 0;
    for (std::size_t j = t; j < t + el.R; ++j) logd -= orbit.log_inv_deriv[j];
    out.log_expansion += logd;
    out.cycle_time += el.R;
    t += el.R;
    done.push_back(t);
    expecting = true;
  }

  std::vector<std::size_t> horizons = options.horizons;
  if (horizons.empty()) horizons.push_back(n);
  std::sort(horizons.begin(), horizons.end());
  for (std::size_t h : horizons) {
    if (h > n) break;
    CounterSample c;
    c.n = h;
    c.H = static_cast<std::size_t>(std::upper_bound(times.begin(), times.end(), h) - times.begin());
    c.R = static_cast<std::size_t>(std::upper_bound(done.begin(), done.end(), h) - done.begin());
    for (const auto& [start, s] : hits) {
      if (start > h) break;
      c.S += s;
    }
    out.trace.push_back(c);
  }
  return out;
}

IntegrabilityReport integrability_check(const InducedPartition& partition, const DensityEstimate& nu,
                                        const std::vector<OrbitCounters>& counters, Real min_coverage) {
  if (partition.elements.empty()) throw Error(ErrorKind::EmptyPartition, "no elements");
  IntegrabilityReport r;
  r.covered_fraction = partition.covered_fraction();
  if (r.covered_fraction < min_coverage) {
    throw Error(ErrorKind::Coverage, "partition covers " + std::to_string(static_cast<double>(r.covered_fraction)) +
                                         " of Delta, need " + std::to_string(static_cast<double>(min_coverage)));
  }
  const MeanReturn mr = mean_return_time(nu, partition);
  r.element_sum = mr.covered_mass > 0 ? mr.value / mr.covered_mass : 0;

  Real birk = 0;
  std::size_t used = 0;
  for (const OrbitCounters& c : counters) {
    if (c.trace.empty() || c.trace.back().R == 0) continue;
    birk += static_cast<Real>(c.trace.back().n) / static_cast<Real>(c.trace.back().R);
    ++used;
  }
  r.birkhoff = used ? birk / static_cast<Real>(used) : 0;

  std::size_t maxR = 0;
  Real cover = 0, weighted = 0;
  for (const PartitionElement& e : partition.elements) {
    maxR = std::max(maxR, e.R);
    cover += e.U.length();
    weighted += static_cast<Real>(e.R) * e.U.length();
  }
  std::vector<Real> by_R(maxR + 1, 0);
  for (const PartitionElement& e : partition.elements) by_R[e.R] += e.U.length();
  Real above = cover;  // Leb{R > n}
  Real tail_sum = 0;
  std::vector<std::pair<Real, Real>> loglog, loglin;
  for (std::size_t n = 0; n < maxR; ++n) {
    above -= by_R[n];
    if (above < 0) above = 0;
    const Real frac = above / cover;
    r.tail.emplace_back(n, frac);
    tail_sum += above;
    if (n >= 1 && frac > 0) {
      loglog.emplace_back(std::log(static_cast<Real>(n)), std::log(frac));
      loglin.emplace_back(static_cast<Real>(n), std::log(frac));
    }
  }
  r.lebesgue_tail = tail_sum / cover;
  r.lebesgue_mean = weighted / cover;
  r.tail_identity_error = std::fabs(r.lebesgue_tail - r.lebesgue_mean) / r.lebesgue_mean;
  r.tail_slope = slope_fit(loglog);
  r.tail_exp_rate = slope_fit(loglin);

  std::vector<Real> est{r.element_sum, r.lebesgue_tail};
  if (used) est.push_back(r.birkhoff);
  for (std::size_t i = 0; i < est.size(); ++i) {
    for (std::size_t j = i + 1; j < est.size(); ++j) {
      const Real lo = std::min(est[i], est[j]);
      const Real gap = lo > 0 ? std::fabs(est[i] - est[j]) / lo : std::numeric_limits<Real>::infinity();
      r.max_pairwise = std::max(r.max_pairwise, gap);
    }
  }
  r.consistent = used > 0 && r.max_pairwise <= r.tolerance;
  return r;
}

std::vector<Real> sample_density(const DensityEstimate& nu, std::size_t count, std::uint64_t seed) {
  std::vector<Real> cum(nu.bins());
  Real acc = 0;
  for (std::size_t i = 0; i < nu.bins(); ++i) cum[i] = (acc += nu.weights[i]);
  if (!(acc > 0)) throw Error(ErrorKind::EmptySet, "density has no mass");
  Rng rng(seed, 0x6e7573616d70ULL);
  std::vector<Real> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const Real u = rng.uniform_ext() * acc;
    std::size_t b = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
    b = std::min(b, nu.bins() - 1);
    const Interval iv = nu.bin(b);
    out.push_back(iv.lo + rng.uniform_ext() * iv.length());
  }
  return out;
}

AbramovReport abramov_check(const MapSpec& spec, const InducedPartition& partition, const DensityEstimate& nu,
                            Real lambda_f, const AbramovOptions& options) {
  if (partition.elements.empty()) throw Error(ErrorKind::EmptyPartition, "no elements");
  AbramovReport r;
  r.lambda_f = lambda_f;
  const auto starts = sample_density(nu, options.orbits, options.seed);
  std::vector<OrbitCounters> runs(starts.size());
  parallel_for(starts.size(), options.workers, [&](std::size_t i) {
    OrbitOptions o;
    o.seed = options.seed * 0x100000001b3ULL + i + 1;
    runs[i] = orbit_counters(spec, partition, partition.params, starts[i], options.length, o);
  });
  Real logs = 0;
  std::size_t time = 0;
  for (const OrbitCounters& c : runs) {
    logs += c.log_expansion;
    time += c.cycle_time;
    r.cycles += c.trace.empty() ? 0 : c.trace.back().R;
  }
  if (r.cycles == 0) throw Error(ErrorKind::EmptySet, "no completed return along the sampled orbits");
  r.lambda_F = logs / static_cast<Real>(r.cycles);
  r.mean_R_orbit = static_cast<Real>(time) / static_cast<Real>(r.cycles);
  const MeanReturn mr = mean_return_time(nu, partition);
  r.mean_R_nu = mr.covered_mass > 0 ? mr.value / mr.covered_mass : 0;
  r.predicted = r.mean_R_nu * lambda_f;
  r.relative_error = r.predicted > 0 ? std::fabs(r.lambda_F - r.predicted) / r.predicted
                                     : std::numeric_limits<Real>::infinity();
  r.passed = r.relative_error <= r.tolerance;
  return r;
}

}  // namespace gmy
