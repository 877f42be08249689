#include "gmy/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gmy {

const char* to_string(DensityRole role) {
  switch (role) {
    case DensityRole::NuInduced: return "nu_induced";
    case DensityRole::MuLifted: return "mu_lifted";
    case DensityRole::MuDirect: return "mu_direct";
    case DensityRole::Analytic: return "analytic";
  }
  return "unknown";
}

Interval DensityEstimate::bin(std::size_t i) const {
  const Real w = width();
  const Real lo = support.lo + w * static_cast<Real>(i);
  const Real hi = i + 1 == weights.size() ? support.hi : lo + w;
  return {lo, hi};
}

std::size_t DensityEstimate::bin_of(Real x) const {
  const Real t = (x - support.lo) / width();
  if (!(t > 0)) return 0;
  const auto k = static_cast<std::size_t>(t);
  return std::min(k, weights.size() - 1);
}

Real DensityEstimate::cdf(Real x) const {
  if (x <= support.lo) return 0;
  if (x >= support.hi) return total();
  const std::size_t k = bin_of(x);
  Real acc = 0;
  for (std::size_t i = 0; i < k; ++i) acc += weights[i];
  return acc + weights[k] * (x - bin(k).lo) / width();
}

Real DensityEstimate::total() const {
  Real t = 0;
  for (Real w : weights) t += w;
  return t;
}

void DensityEstimate::normalize() {
  const Real t = total();
  if (!(t > 0)) throw Error(ErrorKind::EmptySet, "density with zero mass");
  for (Real& w : weights) w /= t;
}

namespace {

// Prefix sums for repeated distribution-function queries.
class Cumulative {
 public:
  explicit Cumulative(const DensityEstimate& d) : d_(d), prefix_(d.bins() + 1, 0) {
    for (std::size_t i = 0; i < d.bins(); ++i) prefix_[i + 1] = prefix_[i] + d.weights[i];
  }
  Real operator()(Real x) const {
    if (x <= d_.support.lo) return 0;
    if (x >= d_.support.hi) return prefix_.back();
    const std::size_t k = d_.bin_of(x);
    const Real frac = std::clamp((x - d_.bin(k).lo) / d_.width(), Real(0), Real(1));
    return prefix_[k] + d_.weights[k] * frac;
  }
  Real mass(const Interval& iv) const { return (*this)(iv.hi) - (*this)(iv.lo); }
  /// Inverse distribution function for u in [0, total).
  Real sample(Real u) const {
    auto it = std::upper_bound(prefix_.begin() + 1, prefix_.end(), u);
    std::size_t k = static_cast<std::size_t>(it - prefix_.begin()) - 1;
    k = std::min(k, d_.bins() - 1);
    while (k + 1 < d_.bins() && !(d_.weights[k] > 0)) ++k;
    const Real frac = d_.weights[k] > 0 ? (u - prefix_[k]) / d_.weights[k] : Real(0.5);
    const Interval b = d_.bin(k);
    return b.lo + std::clamp(frac, Real(0), Real(1)) * b.length();
  }
  Real total() const { return prefix_.back(); }

 private:
  const DensityEstimate& d_;
  std::vector<Real> prefix_;
};

std::vector<std::pair<std::uint32_t, Real>> row_from_columns(std::vector<std::uint32_t>& cols) {
  std::vector<std::pair<std::uint32_t, Real>> row;
  if (cols.empty()) return row;
  std::sort(cols.begin(), cols.end());
  const Real inv = Real(1) / static_cast<Real>(cols.size());
  for (std::size_t i = 0; i < cols.size();) {
    std::size_t j = i;
    while (j < cols.size() && cols[j] == cols[i]) ++j;
    row.emplace_back(cols[i], static_cast<Real>(j - i) * inv);
    i = j;
  }
  return row;
}

Real reduce_point(const MapSpec& spec, Real y) {
  if (spec.is_circle()) return y - std::floor(y);
  return y;
}

void require_bins(std::size_t bins) {
  if (bins < 64) throw Error(ErrorKind::Config, "Ulam estimates need at least 64 bins");
}

}  // namespace

std::vector<Real> stationary_vector(const TransitionRows& rows, Real tolerance, std::size_t max_sweeps,
                                    std::size_t* sweeps) {
  const std::size_t k = rows.size();
  if (k == 0) throw Error(ErrorKind::Shape, "empty transition matrix");
  std::vector<Real> w(k, Real(1) / static_cast<Real>(k));
  std::vector<Real> next(k);
  for (std::size_t s = 1; s <= max_sweeps; ++s) {
    std::fill(next.begin(), next.end(), Real(0));
    for (std::size_t i = 0; i < k; ++i) {
      const Real wi = w[i];
      if (wi == 0) continue;
      for (const auto& [j, p] : rows[i]) next[j] += wi * p;
    }
    Real t = 0;
    for (Real v : next) t += v;
    if (!(t > 0)) throw Error(ErrorKind::Convergence, "transition matrix lost all mass");
    Real diff = 0;
    for (std::size_t i = 0; i < k; ++i) {
      next[i] /= t;
      diff += std::fabs(next[i] - w[i]);
    }
    w.swap(next);
    if (diff < tolerance) {
      if (sweeps) *sweeps = s;
      return w;
    }
  }
  throw Error(ErrorKind::Convergence,
              "power iteration did not reach tolerance in " + std::to_string(max_sweeps) + " sweeps");
}

DensityEstimate ulam_density(const MapSpec& spec, const UlamOptions& opt) {
  require_bins(opt.bins);
  DensityEstimate d;
  d.support = {0, 1};
  d.role = DensityRole::MuDirect;
  d.weights.assign(opt.bins, 0);
  TransitionRows rows(opt.bins);
  const Real per = static_cast<Real>(opt.samples_per_bin);
  parallel_for(opt.bins, opt.workers, [&](std::size_t i) {
    Rng rng(opt.seed, i);
    const Interval b = d.bin(i);
    std::vector<std::uint32_t> cols;
    cols.reserve(opt.samples_per_bin);
    for (std::size_t s = 0; s < opt.samples_per_bin; ++s) {
      const Real x = b.lo + (static_cast<Real>(s) + rng.uniform_ext()) / per * b.length();
      try {
        cols.push_back(static_cast<std::uint32_t>(d.bin_of(evaluate(spec, x))));
      } catch (const Error&) {
      }
    }
    rows[i] = row_from_columns(cols);
  });
  d.weights = stationary_vector(rows, opt.tolerance, opt.max_sweeps, &d.sweeps);
  return d;
}

DensityEstimate ulam_density(const MapSpec& spec, const InducedPartition& partition, const UlamOptions& opt) {
  require_bins(opt.bins);
  if (partition.elements.empty()) throw Error(ErrorKind::EmptyPartition, "partition has no elements");
  DensityEstimate d;
  d.support = partition.base.Delta;
  d.role = DensityRole::NuInduced;
  d.weights.assign(opt.bins, 0);
  TransitionRows rows(opt.bins);
  std::vector<std::size_t> dropped(opt.bins, 0);
  const Real per = static_cast<Real>(opt.samples_per_bin);
  parallel_for(opt.bins, opt.workers, [&](std::size_t i) {
    Rng rng(opt.seed, i);
    const Interval b = d.bin(i);
    std::vector<std::uint32_t> cols;
    cols.reserve(opt.samples_per_bin);
    for (std::size_t s = 0; s < opt.samples_per_bin; ++s) {
      const Real x = b.lo + (static_cast<Real>(s) + rng.uniform_ext()) / per * b.length();
      const auto e = partition.locate(x);
      if (!e) {
        ++dropped[i];
        continue;
      }
      const Real y = reduce_point(spec, forward(spec, x, partition.elements[*e].R));
      cols.push_back(static_cast<std::uint32_t>(d.bin_of(y)));
    }
    rows[i] = row_from_columns(cols);
  });
  std::size_t total_dropped = 0;
  for (std::size_t v : dropped) total_dropped += v;
  d.discarded = static_cast<Real>(total_dropped) / (per * static_cast<Real>(opt.bins));
  d.weights = stationary_vector(rows, opt.tolerance, opt.max_sweeps, &d.sweeps);
  return d;
}

DensityEstimate exact_linear_ulam(const MapSpec& spec, std::size_t bins, Real tolerance, std::size_t max_sweeps) {
  require_bins(bins);
  for (const Branch& br : spec.branches()) {
    if (br.formula.kind != FormulaKind::Linear) throw Error(ErrorKind::Mode, "exact Ulam rows need affine branches");
  }
  DensityEstimate d;
  d.support = {0, 1};
  d.role = DensityRole::MuDirect;
  d.weights.assign(bins, 0);
  TransitionRows rows(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    const Interval b = d.bin(i);
    std::vector<Real> acc(bins, 0);
    for (const Branch& br : spec.branches()) {
      const Real lo = std::max(b.lo, br.domain.lo);
      const Real hi = std::min(b.hi, br.domain.hi);
      if (!(hi > lo)) continue;
      Real u = br.formula.value(lo);
      Real v = br.formula.value(hi);
      if (u > v) std::swap(u, v);
      if (spec.is_circle()) {
        const Real k = std::floor((u + v) / 2);
        u -= k;
        v -= k;
      }
      const Real share = (hi - lo) / b.length();
      const Real span = v - u;
      for (std::size_t j = d.bin_of(u); j < bins; ++j) {
        const Interval c = d.bin(j);
        if (c.lo >= v) break;
        const Real ov = std::min(c.hi, v) - std::max(c.lo, u);
        if (ov > 0) acc[j] += share * ov / span;
      }
    }
    for (std::size_t j = 0; j < bins; ++j) {
      if (acc[j] > 0) rows[i].emplace_back(static_cast<std::uint32_t>(j), acc[j]);
    }
  }
  d.weights = stationary_vector(rows, tolerance, max_sweeps, &d.sweeps);
  return d;
}

DensityEstimate lift_measure(const DensityEstimate& nu, const InducedPartition& partition, const MapSpec& spec,
                             const LiftOptions& opt) {
  if (partition.elements.empty() || !(partition.covered_fraction() > 0)) {
    throw Error(ErrorKind::EmptyPartition, "cannot lift through a partition that covers nothing");
  }
  DensityEstimate mu;
  mu.support = {0, 1};
  mu.role = DensityRole::MuLifted;
  mu.weights.assign(opt.bins, 0);
  const Cumulative F(nu);

  // j = 0: nu restricted to the elements, rebinned exactly.
  for (const PartitionElement& e : partition.elements) {
    Interval U = e.U;
    for (std::size_t j = mu.bin_of(U.lo); j < opt.bins; ++j) {
      const Interval c = mu.bin(j);
      if (c.lo >= U.hi) break;
      const Real lo = std::max(c.lo, U.lo);
      const Real hi = std::min(c.hi, U.hi);
      if (hi > lo) mu.weights[j] += F(hi) - F(lo);
    }
  }

  // j >= 1: push samples of nu forward along their return.
  constexpr std::size_t kChunks = 64;
  std::vector<std::vector<Real>> hist(kChunks);
  std::vector<std::size_t> dropped(kChunks, 0);
  const Real total = F.total();
  const Real weight = total / static_cast<Real>(std::max<std::size_t>(opt.samples, 1));
  parallel_for(kChunks, opt.workers, [&](std::size_t c) {
    Rng rng(opt.seed, 0x6c696674ULL + c);
    std::vector<Real>& h = hist[c];
    h.assign(opt.bins, 0);
    const std::size_t begin = opt.samples * c / kChunks;
    const std::size_t end = opt.samples * (c + 1) / kChunks;
    for (std::size_t s = begin; s < end; ++s) {
      const Real x = F.sample(rng.uniform_ext() * total);
      const auto e = partition.locate(x);
      if (!e) {
        ++dropped[c];
        continue;
      }
      Real y = x;
      const std::size_t R = partition.elements[*e].R;
      for (std::size_t j = 1; j < R; ++j) {
        y = evaluate(spec, y);
        h[mu.bin_of(y)] += weight;
      }
    }
  });
  std::size_t lost = 0;
  for (std::size_t c = 0; c < kChunks; ++c) {
    for (std::size_t j = 0; j < opt.bins; ++j) mu.weights[j] += hist[c][j];
    lost += dropped[c];
  }
  mu.discarded = static_cast<Real>(lost) / static_cast<Real>(std::max<std::size_t>(opt.samples, 1));
  mu.normalize();
  return mu;
}

Real density_distance(const DensityEstimate& a, const DensityEstimate& b) {
  if (a.bins() != b.bins() || a.support != b.support) throw Error(ErrorKind::Shape, "densities on different grids");
  Real s = 0;
  for (std::size_t i = 0; i < a.bins(); ++i) s += std::fabs(a.weights[i] - b.weights[i]);
  return s;
}

Real density_distance(const DensityEstimate& a, const DensityEstimate& b, const Interval& window) {
  if (a.bins() != b.bins() || a.support != b.support) throw Error(ErrorKind::Shape, "densities on different grids");
  Real s = 0;
  for (std::size_t i = 0; i < a.bins(); ++i) {
    if (window.contains(a.bin(i), 1e-15L)) s += std::fabs(a.weights[i] - b.weights[i]);
  }
  return s;
}

MeanReturn mean_return_time(const DensityEstimate& nu, const InducedPartition& partition) {
  const Cumulative F(nu);
  MeanReturn r;
  for (const PartitionElement& e : partition.elements) {
    const Real m = F.mass(e.U);
    r.value += static_cast<Real>(e.R) * m;
    r.covered_mass += m;
  }
  for (const Interval& c : partition.remainder.linear_components()) r.remainder_mass += F.mass(c);
  r.remainder_bound = static_cast<Real>(partition.n_max + 1) * r.remainder_mass;
  return r;
}

std::optional<std::function<Real(Real)>> analytic_cdf(const std::string& name) {
  if (name == "doubling" || name == "tent") return [](Real x) { return std::clamp(x, Real(0), Real(1)); };
  if (name == "logistic") {
    return [](Real x) {
      x = std::clamp(x, Real(0), Real(1));
      return 2 / std::numbers::pi_v<Real> * std::asin(std::sqrt(x));
    };
  }
  return std::nullopt;
}

std::optional<std::function<Real(Real)>> analytic_pdf(const std::string& name) {
  if (name == "doubling" || name == "tent") return [](Real) { return Real(1); };
  if (name == "logistic") {
    return [](Real x) { return 1 / (std::numbers::pi_v<Real> * std::sqrt(x * (1 - x))); };
  }
  return std::nullopt;
}

DensityEstimate density_from_cdf(const std::function<Real(Real)>& cdf, const Interval& support, std::size_t bins,
                                 DensityRole role) {
  DensityEstimate d;
  d.support = support;
  d.role = role;
  d.weights.assign(bins, 0);
  for (std::size_t i = 0; i < bins; ++i) {
    const Interval b = d.bin(i);
    d.weights[i] = cdf(b.hi) - cdf(b.lo);
  }
  d.normalize();
  return d;
}

DensityEstimate analytic_density(const std::string& name, std::size_t bins) {
  const auto cdf = analytic_cdf(name);
  if (!cdf) throw Error(ErrorKind::NotFound, "no analytic density registered for '" + name + "'");
  return density_from_cdf(*cdf, {0, 1}, bins, DensityRole::Analytic);
}

}  // namespace gmy
