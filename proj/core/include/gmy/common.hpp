#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace gmy {

/// Geometry (pullbacks, partition endpoints, forward checks) runs in extended
/// precision: endpoint errors are amplified by |(f^R)'| under forward iteration.
using Real = long double;

inline constexpr Real kRootTolerance = 1e-13L;   // endpoint tolerance of branch inversion
inline constexpr Real kGeomEpsilon = 1e-12L;     // interval merge / containment slack
inline constexpr Real kForwardTolerance = 1e-9L; // f^R(dU) vs dDelta

enum class ErrorKind {
  Domain,
  CriticalPoint,
  NoPreimage,
  Numeric,
  NotFound,
  DeltaTooLarge,
  HyperbolicityViolation,
  SearchFailure,
  Coverage,
  Mode,
  EmptySet,
  Shape,
  Convergence,
  Calibration,
  EmptyPartition,
  Config,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Closed interval [lo, hi] on the real line. On the circle, coordinates are
/// lifted: an interval may extend below 0 or above 1.
struct Interval {
  Real lo = 0;
  Real hi = 0;

  Real length() const { return hi - lo; }
  Real mid() const { return (lo + hi) / 2; }
  bool contains(Real x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o, Real slack = 0) const {
    return lo <= o.lo + slack && o.hi <= hi + slack;
  }
  bool overlaps(const Interval& o, Real slack = kGeomEpsilon) const {
    return o.lo < hi - slack && lo < o.hi - slack;
  }
  Interval shifted(Real s) const { return {lo + s, hi + s}; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Deterministic 64-bit generator (splitmix64). Streams are derived from an
/// explicit seed plus a stream index so parallel work stays reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(finalize(seed + 0x9e3779b97f4a7c15ULL) ^ finalize(finalize(stream) + 0x632be59bd9b4e019ULL)) {
    next();
  }
  std::uint64_t next() { return finalize(state_ += 0x9e3779b97f4a7c15ULL); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Uniform on [0, 1) with 64 random bits.
  Real uniform_ext() { return static_cast<Real>(next()) * 0x1.0p-64L; }

 private:
  static std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
};

/// Runs body(i) for i in [0, count) on up to `workers` threads. Each index
/// must write only to its own output slot.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body);

/// Process-wide default for parallel_for callers that take no explicit count.
unsigned default_workers();
void set_default_workers(unsigned workers);

}  // namespace gmy
