#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gmy/hyperbolic.hpp"
#include "gmy/intervals.hpp"

namespace gmy {

struct BaseDomain {
  Real p = 0;
  Real delta0 = 0;
  Real delta1 = 0;
  std::size_t N0 = 0;
  Interval Delta;       // B(p, delta0)
  Interval DeltaPrime;  // B(p, 2 delta0)
  Real max_gap = 0;     // largest gap of the preimage set up to depth N0
};

struct ConnectorEntry {
  Interval V;   // f^m maps V onto Delta'
  Interval D;   // the part of V mapped onto Delta
  std::size_t m = 0;
  std::vector<Real> path;  // f^j(c), j = 0..m-1, for a point c of V over p
};

struct ConnectorTree {
  std::vector<ConnectorEntry> entries;  // sorted by (D.lo, m)
  std::size_t depth = 0;
  std::size_t discarded = 0;  // components touching C or a break
  Real K0 = 1;
  Real D0 = 0;
  bool circle = false;
};

struct PartitionElement {
  Interval U;
  Real center = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t R = 0;
  PreBall preball;  // path dropped once the element is built
  std::size_t sharing = 1;  // centres of this step whose candidate list contains U
  Real economy = 0;         // |union of their pre-balls| / |U|
};

struct SatelliteStep {
  std::size_t n = 0;
  IntervalSet S;
  Real measure = 0;
  Real measure_outside = 0;  // S_n(Delta^c)
  std::vector<std::pair<std::size_t, Real>> per_element;  // (element index, measure of S_n(U))
  std::size_t centers = 0;
  std::size_t hyperbolic_centers = 0;
  std::size_t failed_preballs = 0;
  std::size_t candidates = 0;
  std::size_t selected = 0;
  std::size_t unsaturated = 0;  // centres whose pre-ball part in Delta is not covered
  Real leftover = 0;            // measure of Delta_n
};

struct SatelliteLedger {
  std::vector<SatelliteStep> steps;
};

struct InducingOptions {
  std::size_t n0 = 1;
  std::size_t n_max = 40;
  std::size_t grid = 4096;            // centres per |Delta| at the first step
  std::size_t min_centers = 2;        // centres per component of Delta_{n-1}
  std::size_t connector_depth = 0;    // 0: use N0
  Real stop_fraction = 0;             // stop once |Delta_n| / |Delta| drops below this
  std::uint64_t seed = 1;
  unsigned workers = 0;
};

struct InducedPartition {
  BaseDomain base;
  HyperbolicParams params;
  std::vector<PartitionElement> elements;
  SatelliteLedger ledger;
  std::vector<Real> leftover;  // measure of Delta_n for each executed step
  IntervalSet remainder;       // Delta at the last executed step
  std::size_t n0 = 0;
  std::size_t n_max = 0;
  Real grid_spacing = 0;
  Real K0 = 1;  // connector bounds
  Real D0 = 0;
  std::size_t connector_depth = 0;

  /// Index of the element containing x, if any.
  std::optional<std::size_t> locate(Real x) const;
  Real covered_fraction() const;
  std::vector<std::size_t> by_position;  // element indices sorted by U.lo
  void reindex();
};

/// Preimages of p up to `depth` (breadth first), sorted. For the interval
/// every point is inside [0,1]; for the circle inside [0,1).
std::vector<Real> preimage_set(const MapSpec& spec, Real p, std::size_t depth);

/// Largest gap of a sorted point set, including the boundary (or wrap) gap.
Real max_gap(const MapSpec& spec, const std::vector<Real>& points);

struct BaseOptions {
  Real delta1 = 0.1;
  Real delta0 = 0;            // 0: delta1 / 20
  bool strict_delta0 = true;  // reject delta0 > delta1 / 20
  std::size_t depth_max = 12;
  std::size_t grid = 64;
  Real critical_eps = 1e-9L;
  std::size_t dyadic_bits = 20;  // p and delta0 rounded to multiples of 2^-bits; 0 keeps them as given
};

/// Minimal N0 <= depth_max such that the preimages of p are delta1/4-dense and
/// stay out of the eps-neighbourhood of C. Errors: search failure, config.
BaseDomain base_from_point(const MapSpec& spec, Real p, const BaseOptions& options);
BaseDomain base_from_point(const MapSpec& spec, Real p, Real delta1, std::size_t depth_max);

/// Scans p over a grid and keeps the first point with minimal N0.
BaseDomain find_base_point(const MapSpec& spec, const BaseOptions& options);
BaseDomain find_base_point(const MapSpec& spec, Real delta1, std::size_t depth_max, std::size_t grid);

ConnectorTree build_connector_tree(const MapSpec& spec, const BaseDomain& base, std::size_t depth = 0);

/// A tree entry V, shifted into the coordinates of `ball`.
struct Reach {
  std::size_t entry = 0;
  std::size_t m = 0;
  Interval V;
  Interval D;
};

/// Minimal-depth entry with closure(V) inside the ball; ties go to the leftmost.
/// Errors: coverage.
Reach reach_delta(const ConnectorTree& tree, const Interval& ball);

/// All entries inside the ball whose Delta-part meets one of `targets`
/// (intervals in ball coordinates, widened by `slack`).
std::vector<Reach> entries_within(const ConnectorTree& tree, const Interval& ball,
                                  const std::vector<Interval>& targets, Real slack);

struct Candidate {
  Interval U;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t entry = 0;
  std::size_t center = 0;  // index into the step's centre list
};

/// The candidate U^x_{n,m} built from the reach_delta entry of the hyperbolic ball.
Candidate candidate_set(const MapSpec& spec, const PreBall& preball, const ConnectorTree& tree);

/// Pull the Delta-part of a reached entry back through the pre-ball.
Interval candidate_from(const MapSpec& spec, const PreBall& preball, const Reach& reach);

/// One step of the partitioning algorithm at hyperbolic time n for the given
/// centres (points of Delta_{n-1}; non-hyperbolic ones are skipped).
void inducing_step(const MapSpec& spec, const ConnectorTree& tree, const InducingOptions& options,
                   InducedPartition& state, std::size_t n, const std::vector<Real>& centers);

/// Grid points for step n: uniform within each component of Delta_{n-1}.
/// inducing_step keeps a point only if it is not already in the middle half
/// of the previously kept pre-ball.
std::vector<Real> step_centers(const IntervalSet& remaining, Real spacing, std::size_t min_per_component);

/// Smallest n0 >= 1 with K0 sigma^((n0 - N0)/2) <= safety.
std::size_t default_n0(Real K0, Real sigma, std::size_t N0, Real safety = 0.5L);

InducedPartition run_inducing(const MapSpec& spec, const BaseDomain& base, const HyperbolicParams& params,
                              const InducingOptions& options);

/// f^k(x). Circle iterates are reduced to [0,1) after every step so the
/// absolute precision does not decay with the lift's growth.
Real forward(const MapSpec& spec, Real x, std::size_t k);

}  // namespace gmy
