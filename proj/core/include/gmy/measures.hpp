#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gmy/inducing.hpp"
#include "gmy/maps.hpp"

namespace gmy {

enum class DensityRole { NuInduced, MuLifted, MuDirect, Analytic };

const char* to_string(DensityRole role);

/// Histogram probability on `support`, one weight per equal-width bin.
struct DensityEstimate {
  Interval support{0, 1};
  std::vector<Real> weights;
  DensityRole role = DensityRole::MuDirect;
  Real discarded = 0;       // fraction of samples that fell in the remainder (induced map only)
  std::size_t sweeps = 0;   // power-iteration sweeps used

  std::size_t bins() const { return weights.size(); }
  Real width() const { return support.length() / static_cast<Real>(weights.size()); }
  Interval bin(std::size_t i) const;
  Real center(std::size_t i) const { return bin(i).mid(); }
  /// weight / width: the Lebesgue density on bin i.
  Real density(std::size_t i) const { return weights[i] / width(); }
  std::size_t bin_of(Real x) const;
  /// measure of [support.lo, x]
  Real cdf(Real x) const;
  Real mass(const Interval& iv) const { return cdf(iv.hi) - cdf(iv.lo); }
  Real total() const;
  void normalize();
};

struct UlamOptions {
  std::size_t bins = 512;
  std::size_t samples_per_bin = 1000;
  std::uint64_t seed = 1;
  Real tolerance = 1e-10L;
  std::size_t max_sweeps = 100000;
  unsigned workers = 0;
};

/// Sparse row-stochastic matrix; row i lists (column, probability).
using TransitionRows = std::vector<std::vector<std::pair<std::uint32_t, Real>>>;

/// Stationary vector by power iteration started from the uniform vector.
/// Rows that lost all their mass are tolerated (the vector is renormalized
/// every sweep). Errors: convergence.
std::vector<Real> stationary_vector(const TransitionRows& rows, Real tolerance, std::size_t max_sweeps,
                                    std::size_t* sweeps = nullptr);

/// Ulam estimate of the acip of f on the phase space [0,1].
DensityEstimate ulam_density(const MapSpec& spec, const UlamOptions& options);

/// Ulam estimate of the F-invariant density on Delta. Samples in the
/// remainder are dropped and counted in `discarded`.
DensityEstimate ulam_density(const MapSpec& spec, const InducedPartition& partition, const UlamOptions& options);

/// Ulam matrix with exact rows for maps whose branches are all affine.
/// Errors: mode (non-affine branch).
DensityEstimate exact_linear_ulam(const MapSpec& spec, std::size_t bins, Real tolerance = 1e-12L,
                                  std::size_t max_sweeps = 100000);

struct LiftOptions {
  std::size_t bins = 512;
  std::size_t samples = 200000;  // Monte Carlo for the j >= 1 terms
  std::uint64_t seed = 1;
  unsigned workers = 0;
};

/// Sum over j of f^j_* (nu restricted to {R > j}), normalized. The j = 0
/// term is deposited exactly; later terms by pushing samples of nu forward.
/// Errors: empty partition.
DensityEstimate lift_measure(const DensityEstimate& nu, const InducedPartition& partition, const MapSpec& spec,
                             const LiftOptions& options);

/// L1 distance of the weight vectors. Errors: shape.
Real density_distance(const DensityEstimate& a, const DensityEstimate& b);
/// Same, summed only over bins lying inside `window`.
Real density_distance(const DensityEstimate& a, const DensityEstimate& b, const Interval& window);

struct MeanReturn {
  Real value = 0;            // sum of R_U nu(U) over elements
  Real covered_mass = 0;     // nu of the union of elements
  Real remainder_mass = 0;   // nu of the remainder
  Real remainder_bound = 0;  // lower bound on the remainder's share: (n_max + 1) * remainder_mass
};

MeanReturn mean_return_time(const DensityEstimate& nu, const InducedPartition& partition);

/// Known acip distribution functions on [0,1], keyed by map name.
std::optional<std::function<Real(Real)>> analytic_cdf(const std::string& map_name);
std::optional<std::function<Real(Real)>> analytic_pdf(const std::string& map_name);

/// Exact bin masses of the analytic acip. Errors: not found.
DensityEstimate analytic_density(const std::string& map_name, std::size_t bins);

/// Histogram of a density function by bin integration of its distribution function.
DensityEstimate density_from_cdf(const std::function<Real(Real)>& cdf, const Interval& support, std::size_t bins,
                                 DensityRole role);

}  // namespace gmy
