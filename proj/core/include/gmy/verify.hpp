#pragma once

#include <cstdint>
#include <vector>

#include "gmy/inducing.hpp"
#include "gmy/measures.hpp"

namespace gmy {

struct ElementCheck {
  std::size_t element = 0;
  std::size_t R = 0;
  Real forward_error = 0;  // distance of f^R(endpoints) from the endpoints of Delta
  Real tolerance = 0;      // max(kForwardTolerance, roundoff floor of the element)
  Real min_expansion = 0;  // min |(f^R)'| over endpoints and samples
  Real distortion = 0;     // max |log|(f^R)'(x)/(f^R)'(y)|| / dist(F x, F y) over sample pairs
  bool full_branch = false;
};

struct GmyReport {
  Real kappa_hat = 0;  // max over elements of 1 / min |(f^R)'|
  Real K_hat = 0;
  bool full_branch_ok = false;
  Real kappa_target = 0;  // K0 sigma^((n0 - N0)/2)
  Real max_forward_error = 0;
  std::size_t min_R = 0;
  std::vector<std::size_t> failures;  // element indices
  std::vector<ElementCheck> elements;

  bool verified() const;
};

/// Full-branch, expansion and distortion checks of every element.
/// A forward error counts as a failure above max(kForwardTolerance,
/// 64 eps |(f^R)'|), capped at |Delta| / 100: below that the endpoint itself
/// is not representable. Elements passing only through that floor must also
/// be recovered by pulling Delta back along their own orbit.
/// Errors: empty partition.
GmyReport check_gmy(const MapSpec& spec, const InducedPartition& partition, std::size_t samples_per_element = 16,
                    std::uint64_t seed = 1, unsigned workers = 0);

struct SummabilityReport {
  std::vector<std::size_t> steps;
  std::vector<Real> measures;      // measure(S_n)
  std::vector<Real> partial_sums;  // sum over steps <= n
  std::size_t window = 10;
  Real tail_spread = 0;  // max - min of the last `window` partial sums
  Real tolerance = 1e-3L;
  bool cauchy = false;
  Real decay_rate = 0;     // least-squares slope of log measure(S_n) against n, nonzero steps only
  Real per_u_slope = 0;    // pooled within-element slope of log measure(S_n(U)) against n - k
  Real per_u_bound = 0;    // (1/2) log sigma
  std::size_t per_u_points = 0;
  std::size_t per_u_groups = 0;
};

/// Errors: shape (fewer than `window` steps).
SummabilityReport satellite_summability(const InducedPartition& partition, std::size_t window = 10,
                                        Real tolerance = 1e-3L);

struct EconomyReport {
  Real max_ratio = 0;     // empirical C3: |union of pre-balls sharing U| / |U|
  Real max_single = 0;    // max |V_n| / |U| of the selected pre-ball alone
  std::vector<std::pair<std::size_t, Real>> per_step;  // (n, max ratio of that step)
  std::size_t max_sharing = 0;
};

EconomyReport preball_economy(const InducedPartition& partition);

struct CounterSample {
  std::size_t n = 0;
  std::size_t H = 0;
  std::size_t R = 0;
  std::size_t S = 0;
};

struct OrbitCounters {
  Real x0 = 0;
  std::vector<CounterSample> trace;  // one sample per requested horizon
  std::size_t remainder_hits = 0;    // cycle starts that fell outside every element
  bool truncated = false;            // set when re-entry is off and the orbit hit the remainder
  std::size_t truncated_at = 0;
  Real log_expansion = 0;            // sum of log|f'| over completed cycles
  std::size_t cycle_time = 0;        // iterates spent inside completed cycles

  /// inf over samples with H > 0 of (R + S) / H
  Real min_key_ratio() const;
};

struct OrbitOptions {
  std::vector<std::size_t> horizons;  // empty: only the final time
  bool reenter = true;  // wait for the next visit to an element instead of stopping
  std::uint64_t seed = 1;
};

/// H: hyperbolic times <= n. R: completed F-returns by time n, following the
/// f-orbit from x0. S: for every cycle started at y in an element built at
/// step k, the number of steps n0 <= j < k with y in S_j.
OrbitCounters orbit_counters(const MapSpec& spec, const InducedPartition& partition, const HyperbolicParams& params,
                             Real x0, std::size_t n, const OrbitOptions& options = {});

struct IntegrabilityReport {
  Real element_sum = 0;     // sum R_U nu(U) / nu(covered)
  Real birkhoff = 0;        // mean over orbits of n / R(n)
  Real lebesgue_tail = 0;   // sum_n Leb{R > n} / Leb(covered)
  Real lebesgue_mean = 0;   // sum R_U Leb(U) / Leb(covered)
  Real tail_identity_error = 0;
  std::vector<std::pair<std::size_t, Real>> tail;  // (n, Leb{R > n} / Leb(covered))
  Real tail_slope = 0;       // log-log slope of the tail
  Real tail_exp_rate = 0;    // slope of log tail against n
  Real covered_fraction = 0;
  Real max_pairwise = 0;     // largest relative gap of the three estimates
  Real tolerance = 0.15L;
  bool consistent = false;
};

/// Errors: empty partition; coverage when partition covers less than `min_coverage`.
IntegrabilityReport integrability_check(const InducedPartition& partition, const DensityEstimate& nu,
                                        const std::vector<OrbitCounters>& counters, Real min_coverage = 0.98L);

struct AbramovReport {
  Real lambda_F = 0;      // mean log|F'| per F-step along nu-sampled orbits
  Real mean_R_orbit = 0;  // mean R along the same orbits
  Real mean_R_nu = 0;     // element sum of R against nu
  Real lambda_f = 0;
  Real predicted = 0;     // mean_R_nu * lambda_f
  Real relative_error = 0;
  Real tolerance = 0.10L;
  std::size_t cycles = 0;
  bool passed = false;
};

struct AbramovOptions {
  std::size_t orbits = 64;
  std::size_t length = 20000;  // f-iterates per orbit
  std::uint64_t seed = 1;
  unsigned workers = 0;
};

/// Errors: empty partition.
AbramovReport abramov_check(const MapSpec& spec, const InducedPartition& partition, const DensityEstimate& nu,
                            Real lambda_f, const AbramovOptions& options = {});

/// Points of nu, drawn bin by bin (bin chosen by weight, uniform inside).
std::vector<Real> sample_density(const DensityEstimate& nu, std::size_t count, std::uint64_t seed);

}  // namespace gmy
