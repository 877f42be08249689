#include "gmy/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gmy {

namespace {

std::int64_t ticks(double v) { return std::llround(v * kTickScale); }

struct TickView {
  std::vector<std::int64_t> c;  // contraction increments, indexed like the orbit
  std::vector<std::int64_t> d;  // recurrence ticks
  std::int64_t T = 0;
};

TickView make_ticks(const OrbitBuffer& orbit, const HyperbolicParams& params) {
  if (orbit.delta != params.delta) {
    const bool any = std::any_of(orbit.log_trunc_dist.begin(), orbit.log_trunc_dist.end(),
                                 [](double v) { return v != 0.0; });
    if (any) throw Error(ErrorKind::Domain, "orbit truncation delta differs from params.delta");
  }
  TickView tv;
  const double log_sigma = std::log(static_cast<double>(params.sigma));
  tv.c.resize(orbit.log_inv_deriv.size());
  tv.d.resize(orbit.log_trunc_dist.size());
  for (std::size_t j = 0; j < tv.c.size(); ++j) tv.c[j] = ticks(orbit.log_inv_deriv[j] - log_sigma);
  for (std::size_t j = 0; j < tv.d.size(); ++j) tv.d[j] = ticks(orbit.log_trunc_dist[j]);
  tv.T = ticks(static_cast<double>(params.b) * -log_sigma);
  return tv;
}

// Index of the contraction term entering the window of length k at time n.
std::size_t contraction_index(IndexConvention conv, std::size_t offset, std::size_t n, std::size_t k) {
  return offset + (conv == IndexConvention::Paper ? n - k + 1 : n - k);
}

Real reduce_if_circle(const MapSpec& spec, Real x) { return spec.is_circle() ? spec.reduce(x) : x; }

}  // namespace

void HyperbolicParams::validate(Real beta) const {
  if (!(sigma > 0 && sigma < 1)) throw Error(ErrorKind::Config, "sigma must lie in (0,1)");
  if (!(delta > 0)) throw Error(ErrorKind::Config, "delta must be positive");
  if (!(b > 0)) throw Error(ErrorKind::Config, "b must be positive");
  if (!(2 * b < std::min<Real>(1, 1 / beta))) throw Error(ErrorKind::Config, "2b must be below min(1, 1/beta)");
}

Real birkhoff_log_inv(const OrbitBuffer& orbit) {
  const std::size_t n = orbit.length();
  if (n == 0) throw Error(ErrorKind::Domain, "empty orbit");
  Real s = 0;
  for (std::size_t j = 1; j <= n; ++j) s += orbit.log_inv_deriv[j];
  return s / static_cast<Real>(n);
}

std::vector<std::pair<Real, Real>> check_sr(const MapSpec& spec, const OrbitBuffer& orbit,
                                            const std::vector<Real>& delta_grid) {
  const std::size_t n = orbit.length();
  std::vector<std::pair<Real, Real>> out;
  out.reserve(delta_grid.size());
  for (Real delta : delta_grid) {
    Real s = 0;
    if (!spec.critical_set().empty() && n > 0) {
      for (std::size_t j = 1; j <= n; ++j) s -= std::log(truncated_distance(spec, orbit.points[j], delta));
      s /= static_cast<Real>(n);
    }
    out.emplace_back(delta, s);
  }
  return out;
}

std::size_t find_power_N(const MapSpec&, const std::vector<OrbitBuffer>& samples, std::size_t n_max) {
  if (samples.empty()) throw Error(ErrorKind::Domain, "no sample orbits");
  std::vector<Real> partial(samples.size(), 0);
  for (std::size_t N = 1; N <= n_max; ++N) {
    Real mean = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (samples[i].log_inv_deriv.size() < N) throw Error(ErrorKind::Domain, "sample orbit shorter than N");
      partial[i] += samples[i].log_inv_deriv[N - 1];
      mean += partial[i];
    }
    if (mean / static_cast<Real>(samples.size()) < 0) return N;
  }
  throw Error(ErrorKind::NotFound, "no power N <= " + std::to_string(n_max) + " with negative mean log-derivative");
}

bool is_hyperbolic_time(const OrbitBuffer& orbit, std::size_t n, const HyperbolicParams& params, std::size_t offset) {
  if (n == 0) throw Error(ErrorKind::Domain, "hyperbolic time index must be positive");
  if (offset + n > orbit.length()) throw Error(ErrorKind::Domain, "index beyond orbit length");
  const TickView tv = make_ticks(orbit, params);
  std::int64_t window = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    window += tv.c[contraction_index(params.index_convention, offset, n, k)];
    if (window > 0) return false;
    if (tv.d[offset + n - k] > static_cast<std::int64_t>(k) * tv.T) return false;
  }
  return true;
}

std::vector<std::size_t> hyperbolic_times_fast(const OrbitBuffer& orbit, const HyperbolicParams& params,
                                               std::size_t offset) {
  std::vector<std::size_t> out;
  if (offset >= orbit.length()) return out;
  const TickView tv = make_ticks(orbit, params);
  const std::size_t len = orbit.length() - offset;
  const bool paper = params.index_convention == IndexConvention::Paper;
  std::int64_t prefix = 0;                // P_n
  std::int64_t min_prefix = 0;            // min_{i<n} P_i
  std::int64_t max_rec = std::numeric_limits<std::int64_t>::min();  // max_{i<n} d_i + i T
  for (std::size_t n = 1; n <= len; ++n) {
    const std::size_t i = n - 1;
    max_rec = std::max(max_rec, tv.d[offset + i] + static_cast<std::int64_t>(i) * tv.T);
    prefix += tv.c[offset + (paper ? n : n - 1)];
    if (prefix <= min_prefix && max_rec <= static_cast<std::int64_t>(n) * tv.T) out.push_back(n);
    min_prefix = std::min(min_prefix, prefix);
  }
  return out;
}

Real frequency_estimate(const std::vector<OrbitBuffer>& orbits, const HyperbolicParams& params) {
  if (orbits.empty()) throw Error(ErrorKind::Domain, "no orbits");
  Real s = 0;
  for (const auto& o : orbits) {
    if (o.length() == 0) continue;
    s += static_cast<Real>(hyperbolic_times_fast(o, params).size()) / static_cast<Real>(o.length());
  }
  return s / static_cast<Real>(orbits.size());
}

bool shift_property_check(const OrbitBuffer& orbit, const HyperbolicParams& params) {
  const auto times = hyperbolic_times_fast(orbit, params);
  if (times.empty()) return true;
  const std::size_t last = times.back();
  for (std::size_t i = 1; i < last; ++i) {
    const auto shifted = hyperbolic_times_fast(orbit, params, i);
    for (std::size_t j : times) {
      if (j <= i) continue;
      if (!std::binary_search(shifted.begin(), shifted.end(), j - i)) return false;
    }
  }
  return true;
}

NueReport nue_report(const MapSpec& spec, const std::vector<OrbitBuffer>& orbits,
                     const std::vector<Real>& delta_grid, std::size_t n_max) {
  if (orbits.empty()) throw Error(ErrorKind::Domain, "no orbits");
  NueReport r;
  Real birk = 0;
  std::vector<Real> sr(delta_grid.size(), 0);
  for (const auto& o : orbits) {
    birk += birkhoff_log_inv(o);
    const auto curve = check_sr(spec, o, delta_grid);
    for (std::size_t i = 0; i < curve.size(); ++i) sr[i] += curve[i].second;
  }
  const Real m = static_cast<Real>(orbits.size());
  r.lambda_hat = -birk / m;
  for (std::size_t i = 0; i < delta_grid.size(); ++i) r.sr_curve.emplace_back(delta_grid[i], sr[i] / m);
  bool monotone = true;
  for (std::size_t i = 1; i < r.sr_curve.size(); ++i) {
    if (r.sr_curve[i].first > r.sr_curve[i - 1].first) monotone = false;
    if (r.sr_curve[i].second > r.sr_curve[i - 1].second) monotone = false;
  }
  try {
    r.n_power = find_power_N(spec, orbits, n_max);
  } catch (const Error&) {
    r.n_power = 0;
  }
  r.passed = r.lambda_hat > 0 && monotone && r.n_power > 0;
  return r;
}

Interval ball(const MapSpec& spec, Real y, Real r) {
  if (spec.is_circle()) return {y - r, y + r};
  return {std::max<Real>(0, y - r), std::min<Real>(1, y + r)};
}

Interval pull_back_along(const MapSpec& spec, const std::vector<Real>& path, Interval J) {
  for (std::size_t k = path.size(); k-- > 0;) J = spec.pull_back(path[k], J);
  return J;
}

PreBall build_preball(const MapSpec& spec, const OrbitBuffer& orbit, std::size_t n, Real delta1,
                      const HyperbolicParams& params) {
  if (n == 0 || n > orbit.length()) throw Error(ErrorKind::Domain, "pre-ball index outside orbit");
  PreBall pb;
  pb.center = orbit.points[0];
  pb.n = n;
  pb.image_ball = ball(spec, orbit.points[n], delta1);
  pb.path.assign(orbit.points.begin(), orbit.points.begin() + static_cast<std::ptrdiff_t>(n));
  Interval J = pb.image_ball;
  const Real full = 2 * delta1;
  for (std::size_t k = 1; k <= n; ++k) {
    try {
      J = spec.pull_back(orbit.points[n - k], J);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NoPreimage || e.kind() == ErrorKind::CriticalPoint ||
          e.kind() == ErrorKind::DeltaTooLarge) {
        throw Error(ErrorKind::DeltaTooLarge, "pullback of the delta1-ball leaves a branch at step " +
                                                  std::to_string(k) + " (" + e.what() + ")");
      }
      throw;
    }
    const Real bound = std::pow(params.sigma, static_cast<Real>(k) / 2) * full;
    if (J.length() > bound * (1 + 1e-9L)) {
      throw Error(ErrorKind::HyperbolicityViolation,
                  "backward contraction fails at k = " + std::to_string(k) + " for n = " + std::to_string(n));
    }
  }
  pb.v_n = J;
  pb.inner_radius = std::min(pb.center - J.lo, J.hi - pb.center);
  return pb;
}

std::vector<Real> pull_point_along(const MapSpec& spec, const std::vector<Real>& path, Real u) {
  std::vector<Real> pts(path.size() + 1);
  pts[path.size()] = u;
  Real y = u;
  for (std::size_t k = path.size(); k-- > 0;) {
    y = spec.pull_back(path[k], Interval{y, y}).lo;
    pts[k] = y;
  }
  return pts;
}

Real distortion_along(const MapSpec& spec, const PreBall& pb, std::size_t pairs, std::uint64_t seed) {
  Rng rng(seed, 0x64697374ULL);
  auto log_deriv = [&](const std::vector<Real>& pts) {
    Real s = 0;
    for (std::size_t j = 0; j < pb.n; ++j) s += std::log(std::fabs(spec.deriv_raw(reduce_if_circle(spec, pts[j]))));
    return s;
  };
  Real worst = 0;
  const Interval& B = pb.image_ball;
  for (std::size_t p = 0; p < pairs; ++p) {
    const Real u = B.lo + rng.uniform_ext() * B.length();
    const Real v = B.lo + rng.uniform_ext() * B.length();
    if (std::fabs(u - v) < 1e-12L) continue;
    const Real diff = std::fabs(log_deriv(pull_point_along(spec, pb.path, u)) - log_deriv(pull_point_along(spec, pb.path, v)));
    worst = std::max(worst, diff / std::fabs(u - v));
  }
  return worst;
}

Real critical_margin(const MapSpec& spec, const PreBall& pb, const HyperbolicParams& params, std::size_t samples,
                     std::uint64_t seed) {
  if (spec.critical_set().empty()) return std::numeric_limits<Real>::infinity();
  Rng rng(seed, 0x6d617267ULL);
  Real worst = std::numeric_limits<Real>::infinity();
  const Interval& B = pb.image_ball;
  for (std::size_t s = 0; s < samples; ++s) {
    const auto pts = pull_point_along(spec, pb.path, B.lo + rng.uniform_ext() * B.length());
    for (std::size_t k = 1; k <= pb.n; ++k) {
      const Real need =
          std::min(params.delta, std::pow(params.sigma, params.b * static_cast<Real>(pb.n - k))) / 2;
      worst = std::min(worst, spec.dist_to_critical(reduce_if_circle(spec, pts[k])) / need);
    }
  }
  return worst;
}

HyperbolicParams calibrate_params(const MapSpec& spec, const NueReport& report) {
  if (!report.passed) throw Error(ErrorKind::Calibration, "NUE/SR report did not pass");
  HyperbolicParams p;
  p.sigma = std::exp(-report.lambda_hat / 2);
  const auto& nd = spec.nondegeneracy();
  const Real beta = nd.kind == CriticalKind::Bounded ? 1 : nd.beta;
  p.b = Real(0.4) * std::min<Real>(1, 1 / beta);
  if (spec.critical_set().empty()) {
    p.delta = 1;
    return p;
  }
  auto curve = report.sr_curve;
  std::sort(curve.begin(), curve.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
  for (const auto& [delta, value] : curve) {
    if (value <= report.lambda_hat / 16) {
      p.delta = delta;
      return p;
    }
  }
  throw Error(ErrorKind::Calibration, "no delta on the grid meets the recurrence threshold");
}

}  // namespace gmy
