#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gmy/maps.hpp"

namespace gmy {

enum class IndexConvention {
  Paper,    // product over j = n-k+1 .. n
  Shifted,  // product over j = n-k .. n-1
};

struct HyperbolicParams {
  Real sigma = 0.5;
  Real delta = 1;
  Real b = 0.4;
  IndexConvention index_convention = IndexConvention::Paper;

  void validate(Real beta = 1) const;
};

/// Fixed-point scale used by both detectors, so that they compare sums of
/// integers and agree exactly.
inline constexpr double kTickScale = 4294967296.0;

struct NueReport {
  Real lambda_hat = 0;
  std::vector<std::pair<Real, Real>> sr_curve;  // (delta, mean -log dist_delta)
  std::size_t n_power = 0;
  bool passed = false;
};

struct PreBall {
  Real center = 0;
  std::size_t n = 0;
  Interval v_n;
  Interval image_ball;
  Real inner_radius = 0;
  /// Orbit points f^j(center), j = 0..n-1; the branch sequence of the pullback.
  std::vector<Real> path;
};

/// (1/n) sum_{j=1}^{n} log |f'(f^j x)|^-1.
Real birkhoff_log_inv(const OrbitBuffer& orbit);

/// Mean of -log dist_delta(f^j x, C), j = 1..n, for each delta of the grid.
std::vector<std::pair<Real, Real>> check_sr(const MapSpec& spec, const OrbitBuffer& orbit,
                                            const std::vector<Real>& delta_grid);

/// Smallest N <= n_max whose sample mean of log |(Df^N)^-1| is negative.
std::size_t find_power_N(const MapSpec& spec, const std::vector<OrbitBuffer>& samples,
                         std::size_t n_max);

/// Brute force over all windows; O(n^2).
bool is_hyperbolic_time(const OrbitBuffer& orbit, std::size_t n, const HyperbolicParams& params,
                        std::size_t offset = 0);

/// All hyperbolic times 1..length (relative to `offset`), O(n).
std::vector<std::size_t> hyperbolic_times_fast(const OrbitBuffer& orbit, const HyperbolicParams& params,
                                               std::size_t offset = 0);

Real frequency_estimate(const std::vector<OrbitBuffer>& orbits, const HyperbolicParams& params);

bool shift_property_check(const OrbitBuffer& orbit, const HyperbolicParams& params);

/// Lambda estimate, SR curve and power N over sample orbits.
NueReport nue_report(const MapSpec& spec, const std::vector<OrbitBuffer>& orbits,
                     const std::vector<Real>& delta_grid, std::size_t n_max = 64);

/// B(y, r) on the circle (lifted), or clipped to [0,1] on the interval.
Interval ball(const MapSpec& spec, Real y, Real r);

/// V_n by n successive pullbacks of B(f^n x, delta1) along the orbit.
/// Errors: delta1-too-large when a pullback leaves a branch, hyperbolicity
/// violation when diam f^{n-k}(V_n) > sigma^{k/2} 2 delta1.
PreBall build_preball(const MapSpec& spec, const OrbitBuffer& orbit, std::size_t n, Real delta1,
                      const HyperbolicParams& params);

/// Pull an interval inside the image ball back to the pre-ball.
Interval pull_back_along(const MapSpec& spec, const std::vector<Real>& path, Interval J);

/// Pulls the point u back along path; returns f^k(y) for k = 0..path.size().
std::vector<Real> pull_point_along(const MapSpec& spec, const std::vector<Real>& path, Real u);

/// Empirical distortion constant over `pairs` random pairs of V_n.
Real distortion_along(const MapSpec& spec, const PreBall& preball, std::size_t pairs,
                      std::uint64_t seed = 1);

/// min over samples y in V_n and 1 <= k <= n of
/// dist(f^k y, C) / (min(delta, sigma^{b(n-k)}) / 2); at least 1 when the
/// distance bound holds. Infinity for C empty.
Real critical_margin(const MapSpec& spec, const PreBall& preball, const HyperbolicParams& params,
                     std::size_t samples, std::uint64_t seed = 1);

HyperbolicParams calibrate_params(const MapSpec& spec, const NueReport& report);

}  // namespace gmy
