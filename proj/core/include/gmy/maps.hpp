#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gmy/common.hpp"

namespace gmy {

enum class PhaseSpace { Circle, Interval };

/// Which nondegeneracy bound applies near the critical set.
///  Critical: B^-1 d^beta <= |f'| <= B d^beta'      (C1)
///  Singular: B^-1 d^-beta' <= |f'| <= B d^-beta    (C1')
///  Bounded:  B^-1 <= |f'| <= B  (corner points such as the tent vertex)
enum class CriticalKind { Critical, Singular, Bounded };

enum class FormulaKind {
  Linear,     // a x + b
  Quadratic,  // a x^2 + b x + c
  Power,      // x + a x^(1 + alpha) + c
};

struct BranchFormula {
  FormulaKind kind = FormulaKind::Linear;
  Real a = 0;
  Real b = 0;
  Real c = 0;

  Real value(Real x) const;
  Real slope(Real x) const;
  /// Unique t in [lo, hi] with value(t) == y, for the monotone restriction.
  Real solve(Real y, Real lo, Real hi) const;
};

/// Maximal interval on which f is a diffeomorphism onto its image. For circle
/// maps the formula is the lift: branch images are consecutive unit intervals
/// [k, k + 1] and f = formula mod 1.
struct Branch {
  Interval domain;
  BranchFormula formula;
  bool increasing = true;
  Interval image;
};

struct Nondegeneracy {
  Real B = 2;
  Real beta = 1;
  Real beta_prime = 1;
  CriticalKind kind = CriticalKind::Critical;
};

/// Immutable one-dimensional dynamical system on [0,1] or the circle [0,1).
class MapSpec {
 public:
  MapSpec(std::string name, PhaseSpace phase, std::vector<Branch> branches,
          std::vector<Real> critical_set, Nondegeneracy nondegeneracy,
          std::vector<Real> breaks = {}, bool exact_binary = false);

  const std::string& name() const { return name_; }
  PhaseSpace phase_space() const { return phase_; }
  bool is_circle() const { return phase_ == PhaseSpace::Circle; }
  const std::vector<Branch>& branches() const { return branches_; }
  const std::vector<Real>& critical_set() const { return critical_; }
  const Nondegeneracy& nondegeneracy() const { return nondegeneracy_; }
  /// Circle points across which the lift is not C^2 (pullbacks may not contain them).
  const std::vector<Real>& breaks() const { return breaks_; }
  /// Orbits of this map collapse in binary floating point (x -> 2x style);
  /// iterate_orbit refreshes the low-order bits.
  bool exact_binary() const { return exact_binary_; }
  /// Circle degree (number of branches covering the circle once each).
  int degree() const { return degree_; }

  std::size_t branch_of(Real x) const;
  Real reduce(Real x) const;
  Real distance(Real x, Real y) const;
  Real dist_to_critical(Real x) const;

  Real eval_raw(Real x) const;
  Real deriv_raw(Real x) const;

  /// Circle lift F: R -> R, increasing, F(t + 1) = F(t) + degree.
  Real lift(Real t) const;
  Real lift_inverse(Real v) const;

  /// Local inverse of f at x applied to J: the interval I around x with
  /// f(I) = J (J taken modulo 1 on the circle).
  /// Throws NoPreimage if J leaves the branch image, DeltaTooLarge if I would
  /// straddle a break, CriticalPoint if I touches the critical set.
  Interval pull_back(Real x, const Interval& J) const;

  /// All preimages of y, one per branch whose image contains y.
  std::vector<Real> preimages(Real y) const;

 private:
  std::string name_;
  PhaseSpace phase_;
  std::vector<Branch> branches_;
  std::vector<Real> critical_;
  Nondegeneracy nondegeneracy_;
  std::vector<Real> breaks_;
  bool exact_binary_;
  int degree_ = 1;
};

/// f(x), reduced mod 1 on the circle. Domain error outside the phase space or
/// at a singular point.
Real evaluate(const MapSpec& spec, Real x);

/// 1 / |f'(x)|. Critical-point error for x in the critical set.
Real inv_norm(const MapSpec& spec, Real x);

/// 1 if dist(x, C) >= delta, else dist(x, C); 1 for empty C.
Real truncated_distance(const MapSpec& spec, Real x, Real delta);
/// Same rule applied to a precomputed distance.
Real truncated_distance_from(Real dist, Real delta);

/// Unique preimage of y under the given branch (no-preimage error if y is
/// outside the branch image).
Real branch_inverse(const MapSpec& spec, std::size_t branch_id, Real y);
Interval branch_inverse(const MapSpec& spec, std::size_t branch_id, const Interval& y);

struct OrbitBuffer {
  Real x0 = 0;
  Real delta = 1;
  std::vector<Real> points;            // f^j(x0), j = 0..n
  std::vector<double> log_inv_deriv;   // log |f'(f^j x0)|^-1
  std::vector<double> log_trunc_dist;  // -log dist_delta(f^j x0, C) >= 0
  std::size_t nudges = 0;              // critical-point hits that were nudged

  std::size_t length() const { return points.empty() ? 0 : points.size() - 1; }
};

/// Orbit of x0 under f with cached log-derivative and recurrence sequences.
/// `seed` drives the low-bit refresh of exact-binary maps.
OrbitBuffer iterate_orbit(const MapSpec& spec, Real x0, std::size_t n, Real delta,
                          std::uint64_t seed = 0);

/// Built-in maps: "doubling", "tent", "logistic", "manneville_pomeau".
MapSpec make_doubling();
MapSpec make_tent();
MapSpec make_logistic();
MapSpec make_manneville_pomeau(Real alpha);
MapSpec make_builtin(const std::string& name, Real alpha = 0.5);
std::vector<std::string> builtin_names();

}  // namespace gmy
