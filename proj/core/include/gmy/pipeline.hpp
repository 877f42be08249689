#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gmy/config.hpp"
#include "gmy/io.hpp"
#include "gmy/measures.hpp"
#include "gmy/verify.hpp"

namespace gmy {

MapSpec make_map(const RunConfig& config);

struct Analysis {
  NueReport nue;
  HyperbolicParams calibrated;  // from the report alone
  HyperbolicParams params;      // after config overrides
  BaseDomain base;
  Real K0 = 1;
  std::size_t n0 = 1;
  bool n0_defaulted = false;
  std::vector<std::string> flags;  // diagnostics such as a non-integrable regime
};

/// NUE/SR report over seeded orbits, calibration, overrides and base ball.
/// Errors: config, calibration, search failure.
Analysis analyze(const RunConfig& config, const MapSpec& spec);

InducedPartition induce(const RunConfig& config, const MapSpec& spec, const Analysis& analysis);

struct Verification {
  GmyReport gmy;
  std::optional<SummabilityReport> summability;
  EconomyReport economy;
  DensityEstimate nu;
  std::vector<OrbitCounters> counters;
  std::optional<IntegrabilityReport> integrability;
  std::string integrability_error;
  AbramovReport abramov;
  Real key_ratio_inf = 0;  // inf over orbits of (R + S) / H

  bool passed() const;
};

/// Horizons at which orbit counters are sampled: 10, 100, then every 1000 up to n.
std::vector<std::size_t> counter_horizons(std::size_t n);

Verification verify(const RunConfig& config, const MapSpec& spec, const InducedPartition& partition, Real lambda_f);

struct LiftResult {
  DensityEstimate mu_lifted;
  DensityEstimate mu_direct;
  std::optional<DensityEstimate> analytic;
  Real l1_lifted_direct = 0;
  std::optional<Real> l1_lifted_analytic;
  std::optional<Real> l1_direct_analytic;
  std::optional<Interval> window;
};

LiftResult lift(const RunConfig& config, const MapSpec& spec, const InducedPartition& partition,
                const DensityEstimate& nu);

Json to_json(const Analysis& a);
/// Inverse of to_json(Analysis). Errors: config.
Analysis analysis_from_json(const Json& j);
Json to_json(const Verification& v);
Json to_json(const LiftResult& l);

}  // namespace gmy
