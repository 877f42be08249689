#include "gmy/maps.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

namespace gmy {

namespace {

std::string fmt(Real x) {
  std::ostringstream os;
  os.precision(21);
  os << static_cast<long double>(x);
  return os.str();
}

// Safeguarded Newton on a monotone function over [lo, hi].
template <class G, class DG>
Real bracketed_newton(G g, DG dg, Real y, Real lo, Real hi) {
  Real glo = g(lo) - y;
  const bool rising = (g(hi) - y) > glo;
  Real t = (lo + hi) / 2;
  for (int it = 0; it < 200; ++it) {
    const Real r = g(t) - y;
    if (r == 0) return t;
    if ((r > 0) == rising) hi = t; else lo = t;
    const Real d = dg(t);
    Real next = (d != 0) ? t - r / d : (lo + hi) / 2;
    if (!(next > lo && next < hi)) next = (lo + hi) / 2;
    if (std::fabs(next - t) <= 4 * std::numeric_limits<Real>::epsilon() * std::max<Real>(1, std::fabs(t)) ||
        hi - lo <= 4 * std::numeric_limits<Real>::epsilon() * std::max<Real>(1, std::fabs(t))) {
      return next;
    }
    t = next;
  }
  return t;
}

}  // namespace

Real BranchFormula::value(Real x) const {
  switch (kind) {
    case FormulaKind::Linear: return a * x + b;
    case FormulaKind::Quadratic: return (a * x + b) * x + c;
    case FormulaKind::Power: {
      const Real t = std::max<Real>(x, 0);
      return x + a * (b == 0.5L ? t * std::sqrt(t) : std::pow(t, 1 + b)) + c;
    }
  }
  return 0;
}

Real BranchFormula::slope(Real x) const {
  switch (kind) {
    case FormulaKind::Linear: return a;
    case FormulaKind::Quadratic: return 2 * a * x + b;
    case FormulaKind::Power: {
      const Real t = std::max<Real>(x, 0);
      return 1 + a * (1 + b) * (b == 0.5L ? std::sqrt(t) : std::pow(t, b));
    }
  }
  return 0;
}

Real BranchFormula::solve(Real y, Real lo, Real hi) const {
  auto g = [this](Real t) { return value(t); };
  auto dg = [this](Real t) { return slope(t); };
  switch (kind) {
    case FormulaKind::Linear:
      return std::clamp((y - b) / a, lo, hi);
    case FormulaKind::Quadratic: {
      // Stable quadratic roots of a t^2 + b t + (c - y), then one Newton polish.
      const Real cc = c - y;
      Real disc = b * b - 4 * a * cc;
      if (disc < 0) disc = 0;
      const Real q = -(b + std::copysign(std::sqrt(disc), b)) / 2;
      Real r1 = (a != 0) ? q / a : std::numeric_limits<Real>::quiet_NaN();
      Real r2 = (q != 0) ? cc / q : std::numeric_limits<Real>::quiet_NaN();
      const Real slack = 1e-9L;
      Real t;
      if (r1 >= lo - slack && r1 <= hi + slack) t = r1;
      else if (r2 >= lo - slack && r2 <= hi + slack) t = r2;
      else return bracketed_newton(g, dg, y, lo, hi);
      t = std::clamp(t, lo, hi);
      const Real d = slope(t);
      if (d != 0) {
        const Real polished = t - (value(t) - y) / d;
        if (polished >= lo && polished <= hi) t = polished;
      }
      return t;
    }
    case FormulaKind::Power:
      return bracketed_newton(g, dg, y, lo, hi);
  }
  return lo;
}

MapSpec::MapSpec(std::string name, PhaseSpace phase, std::vector<Branch> branches,
                 std::vector<Real> critical_set, Nondegeneracy nondegeneracy,
                 std::vector<Real> breaks, bool exact_binary)
    : name_(std::move(name)),
      phase_(phase),
      branches_(std::move(branches)),
      critical_(std::move(critical_set)),
      nondegeneracy_(nondegeneracy),
      breaks_(std::move(breaks)),
      exact_binary_(exact_binary) {
  if (branches_.empty()) throw Error(ErrorKind::Config, "map '" + name_ + "' has no branches");
  std::sort(branches_.begin(), branches_.end(),
            [](const Branch& l, const Branch& r) { return l.domain.lo < r.domain.lo; });
  if (std::fabs(branches_.front().domain.lo) > kGeomEpsilon ||
      std::fabs(branches_.back().domain.hi - 1) > kGeomEpsilon) {
    throw Error(ErrorKind::Config, "branches of '" + name_ + "' do not cover [0,1]");
  }
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    Branch& br = branches_[i];
    if (!(br.domain.lo < br.domain.hi)) throw Error(ErrorKind::Config, "empty branch in '" + name_ + "'");
    if (i + 1 < branches_.size() && std::fabs(br.domain.hi - branches_[i + 1].domain.lo) > kGeomEpsilon) {
      throw Error(ErrorKind::Config, "branches of '" + name_ + "' leave a gap or overlap");
    }
    const Real vlo = br.formula.value(br.domain.lo);
    const Real vhi = br.formula.value(br.domain.hi);
    br.increasing = vhi > vlo;
    if (phase_ == PhaseSpace::Circle) {
      if (!br.increasing) throw Error(ErrorKind::Config, "circle branches must be increasing lifts");
      br.image = {static_cast<Real>(i), static_cast<Real>(i + 1)};
      if (std::fabs(vlo - br.image.lo) > 1e-9L || std::fabs(vhi - br.image.hi) > 1e-9L) {
        throw Error(ErrorKind::Config, "circle branch " + std::to_string(i) + " of '" + name_ +
                                           "' must map onto [" + std::to_string(i) + "," +
                                           std::to_string(i + 1) + "]");
      }
    } else {
      br.image = {std::min(vlo, vhi), std::max(vlo, vhi)};
    }
    // Strict monotonicity by sampled sign of f'.
    for (int k = 1; k < 16; ++k) {
      const Real t = br.domain.lo + br.domain.length() * k / 16;
      const Real s = br.formula.slope(t);
      if ((s > 0) != br.increasing || s == 0) {
        throw Error(ErrorKind::Config, "branch " + std::to_string(i) + " of '" + name_ + "' is not strictly monotone");
      }
    }
  }
  degree_ = static_cast<int>(branches_.size());
  std::sort(critical_.begin(), critical_.end());
}

std::size_t MapSpec::branch_of(Real x) const {
  auto it = std::upper_bound(branches_.begin(), branches_.end(), x,
                             [](Real v, const Branch& b) { return v < b.domain.lo; });
  if (it == branches_.begin()) return 0;
  return static_cast<std::size_t>(std::distance(branches_.begin(), it) - 1);
}

Real MapSpec::reduce(Real x) const {
  if (phase_ != PhaseSpace::Circle) return x;
  Real r = x - std::floor(x);
  if (r >= 1) r = 0;
  return r;
}

Real MapSpec::distance(Real x, Real y) const {
  Real d = std::fabs(x - y);
  if (phase_ == PhaseSpace::Circle) {
    d = d - std::floor(d);
    d = std::min(d, 1 - d);
  }
  return d;
}

Real MapSpec::dist_to_critical(Real x) const {
  Real best = std::numeric_limits<Real>::infinity();
  for (Real c : critical_) best = std::min(best, distance(x, c));
  return best;
}

Real MapSpec::eval_raw(Real x) const {
  const Branch& br = branches_[branch_of(x)];
  const Real v = br.formula.value(x);
  if (phase_ == PhaseSpace::Circle) return reduce(v);
  return std::clamp<Real>(v, 0, 1);
}

Real MapSpec::deriv_raw(Real x) const { return branches_[branch_of(x)].formula.slope(x); }

Real MapSpec::lift(Real t) const {
  const Real k = std::floor(t);
  Real u = t - k;
  if (u >= 1) u = std::nextafter(Real(1), Real(0));
  return branches_[branch_of(u)].formula.value(u) + degree_ * k;
}

Real MapSpec::lift_inverse(Real v) const {
  const Real k = std::floor(v / degree_);
  const Real w = v - degree_ * k;
  std::size_t idx = static_cast<std::size_t>(std::clamp<Real>(std::floor(w), 0, degree_ - 1));
  const Branch& br = branches_[idx];
  return br.formula.solve(w, br.domain.lo, br.domain.hi) + k;
}

Interval MapSpec::pull_back(Real x, const Interval& J) const {
  Interval I;
  if (phase_ == PhaseSpace::Circle) {
    if (J.length() >= 1) throw Error(ErrorKind::DeltaTooLarge, "pullback target wraps the circle");
    const Real fx = lift(x);
    const Real s = std::round(fx - J.mid());
    I = {lift_inverse(J.lo + s), lift_inverse(J.hi + s)};
    for (Real b : breaks_) {
      for (Real k = std::floor(I.lo) - 1; k <= std::ceil(I.hi) + 1; k += 1) {
        const Real p = b + k;
        if (p > I.lo && p < I.hi) throw Error(ErrorKind::DeltaTooLarge, "pullback straddles break point " + fmt(b));
      }
    }
    for (Real c : critical_) {
      for (Real k = std::floor(I.lo) - 1; k <= std::ceil(I.hi) + 1; k += 1) {
        if (I.contains(c + k)) throw Error(ErrorKind::CriticalPoint, "pullback meets critical point " + fmt(c));
      }
    }
    return I;
  }
  const Branch& br = branches_[branch_of(x)];
  if (J.lo < br.image.lo - kRootTolerance || J.hi > br.image.hi + kRootTolerance) {
    throw Error(ErrorKind::NoPreimage, "interval [" + fmt(J.lo) + "," + fmt(J.hi) + "] leaves branch image");
  }
  const Real ylo = std::clamp(J.lo, br.image.lo, br.image.hi);
  const Real yhi = std::clamp(J.hi, br.image.lo, br.image.hi);
  const Real a = br.formula.solve(ylo, br.domain.lo, br.domain.hi);
  const Real b = br.formula.solve(yhi, br.domain.lo, br.domain.hi);
  I = {std::min(a, b), std::max(a, b)};
  for (Real c : critical_) {
    if (I.contains(c)) throw Error(ErrorKind::CriticalPoint, "pullback meets critical point " + fmt(c));
  }
  return I;
}

std::vector<Real> MapSpec::preimages(Real y) const {
  std::vector<Real> out;
  for (const Branch& br : branches_) {
    const Real target = (phase_ == PhaseSpace::Circle) ? y + br.image.lo : y;
    if (target < br.image.lo || target > br.image.hi) continue;
    Real t = br.formula.solve(target, br.domain.lo, br.domain.hi);
    if (phase_ == PhaseSpace::Circle && t >= 1) continue;
    if (!out.empty() && std::fabs(out.back() - t) < kGeomEpsilon) continue;
    out.push_back(t);
  }
  return out;
}

Real evaluate(const MapSpec& spec, Real x) {
  if (!std::isfinite(x) || x < 0 || x > 1 || (spec.is_circle() && x == 1)) {
    throw Error(ErrorKind::Domain, "point " + fmt(x) + " outside phase space of " + spec.name());
  }
  if (spec.nondegeneracy().kind == CriticalKind::Singular) {
    for (Real c : spec.critical_set()) {
      if (spec.distance(x, c) == 0) throw Error(ErrorKind::Domain, "evaluation at singular point " + fmt(c));
    }
  }
  return spec.eval_raw(x);
}

Real inv_norm(const MapSpec& spec, Real x) {
  for (Real c : spec.critical_set()) {
    if (spec.distance(x, c) == 0) throw Error(ErrorKind::CriticalPoint, "derivative at critical point " + fmt(c));
  }
  const Real d = std::fabs(spec.deriv_raw(x));
  if (d == 0) throw Error(ErrorKind::CriticalPoint, "zero derivative at " + fmt(x));
  return 1 / d;
}

Real truncated_distance_from(Real dist, Real delta) { return dist >= delta ? Real(1) : dist; }

Real truncated_distance(const MapSpec& spec, Real x, Real delta) {
  if (spec.critical_set().empty()) return 1;
  return truncated_distance_from(spec.dist_to_critical(x), delta);
}

Real branch_inverse(const MapSpec& spec, std::size_t branch_id, Real y) {
  if (branch_id >= spec.branches().size()) throw Error(ErrorKind::Domain, "no such branch");
  const Branch& br = spec.branches()[branch_id];
  const Real target = spec.is_circle() ? y + br.image.lo : y;
  if (target < br.image.lo - kRootTolerance || target > br.image.hi + kRootTolerance) {
    throw Error(ErrorKind::NoPreimage, fmt(y) + " outside image of branch " + std::to_string(branch_id));
  }
  return br.formula.solve(std::clamp(target, br.image.lo, br.image.hi), br.domain.lo, br.domain.hi);
}

Interval branch_inverse(const MapSpec& spec, std::size_t branch_id, const Interval& y) {
  const Real a = branch_inverse(spec, branch_id, y.lo);
  const Real b = branch_inverse(spec, branch_id, y.hi);
  return {std::min(a, b), std::max(a, b)};
}

OrbitBuffer iterate_orbit(const MapSpec& spec, Real x0, std::size_t n, Real delta, std::uint64_t seed) {
  OrbitBuffer orb;
  orb.x0 = x0;
  orb.delta = delta;
  orb.points.reserve(n + 1);
  orb.log_inv_deriv.reserve(n + 1);
  orb.log_trunc_dist.reserve(n + 1);
  if (seed == 0) {
    double xd = static_cast<double>(x0);
    std::memcpy(&seed, &xd, sizeof seed);
  }
  Rng rng(seed, 0x6f72626974ULL);
  const bool has_critical = !spec.critical_set().empty();
  Real x = x0;
  for (std::size_t j = 0; j <= n; ++j) {
    if (!std::isfinite(x)) {
      throw Error(ErrorKind::Numeric, "non-finite orbit value at index " + std::to_string(j));
    }
    if (has_critical && spec.dist_to_critical(x) < kRootTolerance) {
      x = spec.reduce(x + 2 * kRootTolerance);
      ++orb.nudges;
    }
    const Real d = std::fabs(spec.deriv_raw(x));
    if (!(d > 0) || !std::isfinite(d)) {
      throw Error(ErrorKind::Numeric, "invalid derivative at index " + std::to_string(j));
    }
    orb.points.push_back(x);
    orb.log_inv_deriv.push_back(-static_cast<double>(std::log(d)));
    orb.log_trunc_dist.push_back(
        has_critical ? -static_cast<double>(std::log(truncated_distance_from(spec.dist_to_critical(x), delta))) : 0.0);
    if (j == n) break;
    Real next = evaluate(spec, x);
    if (spec.exact_binary()) {
      const Real eta = rng.uniform_ext() * 0x1.0p-56L;
      next = spec.is_circle() ? spec.reduce(next + eta) : (next + eta <= 1 ? next + eta : next - eta);
    }
    x = next;
  }
  return orb;
}

MapSpec make_doubling() {
  std::vector<Branch> br{
      {{0, 0.5L}, {FormulaKind::Linear, 2, 0, 0}, true, {}},
      {{0.5L, 1}, {FormulaKind::Linear, 2, 0, 0}, true, {}},
  };
  return MapSpec("doubling", PhaseSpace::Circle, std::move(br), {}, {2, 1, 1, CriticalKind::Bounded}, {}, true);
}

MapSpec make_tent() {
  std::vector<Branch> br{
      {{0, 0.5L}, {FormulaKind::Linear, 2, 0, 0}, true, {}},
      {{0.5L, 1}, {FormulaKind::Linear, -2, 2, 0}, false, {}},
  };
  return MapSpec("tent", PhaseSpace::Interval, std::move(br), {0.5L}, {2, 1, 1, CriticalKind::Bounded}, {}, true);
}

MapSpec make_logistic() {
  std::vector<Branch> br{
      {{0, 0.5L}, {FormulaKind::Quadratic, -4, 4, 0}, true, {}},
      {{0.5L, 1}, {FormulaKind::Quadratic, -4, 4, 0}, false, {}},
  };
  return MapSpec("logistic", PhaseSpace::Interval, std::move(br), {0.5L}, {8, 1, 1, CriticalKind::Critical});
}

MapSpec make_manneville_pomeau(Real alpha) {
  if (!(alpha > 0)) throw Error(ErrorKind::Config, "Manneville-Pomeau alpha must be positive");
  BranchFormula lift{FormulaKind::Power, 1, alpha, 0};
  const Real c = lift.solve(1, 0, 1);
  std::vector<Branch> br{
      {{0, c}, lift, true, {}},
      {{c, 1}, lift, true, {}},
  };
  return MapSpec("manneville_pomeau", PhaseSpace::Circle, std::move(br), {}, {2 + alpha, 1, 1, CriticalKind::Bounded},
                 {0});
}

MapSpec make_builtin(const std::string& name, Real alpha) {
  if (name == "doubling") return make_doubling();
  if (name == "tent") return make_tent();
  if (name == "logistic") return make_logistic();
  if (name == "manneville_pomeau" || name == "mp") return make_manneville_pomeau(alpha);
  throw Error(ErrorKind::Config, "unknown built-in map '" + name + "'");
}

std::vector<std::string> builtin_names() { return {"doubling", "tent", "logistic", "manneville_pomeau"}; }

}  // namespace gmy
