#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gmy/hyperbolic.hpp"
#include "gmy/inducing.hpp"

namespace gmy {

inline constexpr int kSchemaVersion = 1;

/// Everything one pipeline run needs. Real-valued fields accept JSON numbers
/// or decimal/hex strings (strings keep full long double precision).
struct RunConfig {
  std::string map = "doubling";
  Real alpha = 0.5L;  // Manneville-Pomeau exponent

  // analyze
  std::size_t analysis_orbits = 64;
  std::size_t analysis_length = 4096;
  std::vector<Real> delta_grid{1, 0.5L, 0.25L, 0.1L, 0.05L, 0.02L, 0.01L, 0.005L, 0.002L, 0.001L};

  // base ball
  Real delta1 = 0.1L;
  std::optional<Real> delta0;
  std::optional<Real> p;  // base point; searched when absent
  bool strict_delta0 = true;
  std::size_t dyadic_bits = 20;
  std::size_t depth_max = 12;
  std::size_t base_grid = 64;

  // hyperbolic-time overrides of the calibration
  std::optional<Real> sigma;
  std::optional<Real> delta;
  std::optional<Real> b;
  IndexConvention index_convention = IndexConvention::Paper;

  // induce
  std::optional<std::size_t> n0;  // absent: default_n0
  std::size_t n_max = 40;
  std::size_t grid = 4096;
  std::size_t connector_depth = 0;

  // verify
  std::size_t samples_per_element = 16;
  std::size_t orbits = 32;
  std::size_t orbit_length = 100000;
  std::size_t abramov_orbits = 64;
  std::size_t abramov_length = 20000;

  // lift
  std::size_t bins = 512;
  std::size_t ulam_samples = 1000;   // per bin
  std::size_t lift_samples = 200000;
  std::optional<Real> lift_window_lo;  // L1 window against the analytic density
  std::optional<Real> lift_window_hi;

  std::uint64_t seed = 1;
  unsigned workers = 0;
  Real coverage_threshold = 0.98L;

  BaseOptions base_options() const;
};

/// Errors: config (unknown key, wrong type, bad value), io (unreadable file).
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string dump_config(const RunConfig& config);

/// Exact round-trip text for a long double ("%La").
std::string hex_real(Real x);
/// Decimal or hex; errors: config.
Real parse_real(const std::string& text);

}  // namespace gmy
