// Acceptance suite: one line per criterion, exit status 1 if any fails.
// Usage: gmy_acceptance [config_dir] [gmy_binary] [scratch_dir]

#include <algorithm>
#include <chrono>
#include <cfloat>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gmy/pipeline.hpp"

namespace fs = std::filesystem;
using namespace gmy;

namespace {

// Pinned tolerances.
constexpr Real kLambdaTol = 1e-9L;
constexpr Real kRadiusTol = 1e-12L;
constexpr Real kLengthTol = 1e-9L;
constexpr Real kFullBranchTol = 1e-9L;
constexpr Real kCoverageTight = 0.02L;  // doubling, tent
constexpr Real kCoverageLoose = 0.05L;  // logistic, Manneville-Pomeau
constexpr Real kCauchyTol = 1e-3L;
constexpr std::size_t kCauchyWindow = 10;
constexpr Real kTriangleTol = 0.15L;
constexpr Real kKeyRatioFactor = 0.5L;
constexpr Real kLiftTol = 0.08L;
constexpr Real kAbramovTol = 0.10L;
constexpr std::size_t kOracleOrbits = 1000;
constexpr std::size_t kOracleLength = 1000;

std::string cfg_dir = GMY_CONFIG_DIR;
std::string cli = GMY_CLI_PATH;
std::string scratch = "acceptance_out";

struct Run {
  RunConfig config;
  MapSpec spec;
  Analysis analysis;
  InducedPartition partition;
  Verification verification;
  std::optional<LiftResult> lifted;
  double seconds = 0;
};

std::map<std::string, Run> runs;

const char* config_file(const std::string& map) {
  if (map == "manneville_pomeau") return "manneville_pomeau.json";
  if (map == "doubling") return "doubling.json";
  if (map == "tent") return "tent.json";
  return "logistic.json";
}

Run& run(const std::string& map, bool with_lift) {
  auto it = runs.find(map);
  if (it == runs.end()) {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig c = load_config((fs::path(cfg_dir) / config_file(map)).string());
    MapSpec spec = make_map(c);
    Analysis a = analyze(c, spec);
    InducedPartition P = induce(c, spec, a);
    Verification v = verify(c, spec, P, a.nue.lambda_hat);
    Run r{c, spec, a, std::move(P), std::move(v), std::nullopt, 0};
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    it = runs.emplace(map, std::move(r)).first;
  }
  Run& r = it->second;
  if (with_lift && !r.lifted) r.lifted = lift(r.config, r.spec, r.partition, r.verification.nu);
  return r;
}

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("[%s] %2d %-28s %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

const std::vector<std::string> kMaps = {"doubling", "tent", "logistic", "manneville_pomeau"};
const std::vector<std::string> kRegular = {"doubling", "tent", "logistic"};

void hyperbolic_oracle() {
  bool ok = true;
  std::string detail;
  std::size_t checked = 0;
  for (const auto& m : kMaps) {
    const Run& r = run(m, false);
    Rng rng(r.config.seed, 0x6f7261636c65ULL);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < kOracleOrbits; ++i) {
      const OrbitBuffer o =
          iterate_orbit(r.spec, rng.uniform_ext(), kOracleLength, r.analysis.params.delta, r.config.seed + i);
      const auto fast = hyperbolic_times_fast(o, r.analysis.params);
      std::vector<std::size_t> naive;
      for (std::size_t n = 1; n <= o.length(); ++n) {
        if (is_hyperbolic_time(o, n, r.analysis.params)) naive.push_back(n);
      }
      checked += naive.size();
      if (fast != naive) ++mismatches;
    }
    if (mismatches) ok = false;
    detail += fmt("%s:%zu ", m.c_str(), mismatches);
  }
  report(1, "hyperbolic-time oracle", ok, fmt("mismatching orbits %s(%zu hyperbolic times)", detail.c_str(), checked));
}

void doubling_suite() {
  const Run& r = run("doubling", false);
  const Real lambda_err = std::fabs(r.analysis.nue.lambda_hat - std::log(2.0L));

  HyperbolicParams hp = r.analysis.params;
  hp.sigma = 0.6L;
  std::size_t missing = 0;
  Real radius_err = 0;
  Rng rng(r.config.seed, 0x646f75626cULL);
  for (std::size_t i = 0; i < 32; ++i) {
    const OrbitBuffer o = iterate_orbit(r.spec, rng.uniform_ext(), 200, hp.delta, i + 1);
    missing += o.length() - hyperbolic_times_fast(o, hp).size();
    for (std::size_t n : {1, 5, 17, 40}) {
      const PreBall pb = build_preball(r.spec, o, n, r.analysis.base.delta1, hp);
      radius_err = std::max(radius_err, std::fabs(pb.v_n.length() / 2 - r.analysis.base.delta1 * std::ldexp(1.0L, -int(n))));
    }
  }
  for (const PartitionElement& e : r.partition.elements) {
    radius_err = std::max(radius_err, std::fabs(e.preball.v_n.length() / 2 -
                                                r.analysis.base.delta1 * std::ldexp(1.0L, -int(e.n))));
  }
  Real length_err = 0;
  const Real D = r.partition.base.Delta.length();
  for (const PartitionElement& e : r.partition.elements) {
    length_err = std::max(length_err, std::fabs(e.U.length() - D * std::ldexp(1.0L, -int(e.R))));
  }
  const Real kappa_exact = std::ldexp(1.0L, -int(r.verification.gmy.min_R));
  const bool ok = lambda_err <= kLambdaTol && missing == 0 && radius_err <= kRadiusTol && length_err <= kLengthTol &&
                  r.verification.gmy.kappa_hat == kappa_exact;
  report(2, "doubling analytic suite", ok,
         fmt("|lambda-log2|=%.2Le non-hyperbolic=%zu radius err=%.2Le |U| err=%.2Le kappa=%.6Lg vs 2^-%zu",
             lambda_err, missing, radius_err, length_err, r.verification.gmy.kappa_hat, r.verification.gmy.min_R));
}

void gmy_contract() {
  bool ok = true;
  std::string detail;
  for (const auto& m : kRegular) {
    const GmyReport& g = run(m, false).verification.gmy;
    std::size_t bad = 0;
    for (const ElementCheck& c : g.elements) {
      if (!c.full_branch || !(c.forward_error <= kFullBranchTol)) ++bad;
    }
    const bool pass = bad == 0 && g.kappa_hat < 1 && std::isfinite(g.K_hat);
    ok = ok && pass;
    detail += fmt("%s: %zu/%zu bad kappa=%.3Lg K=%.3Lg; ", m.c_str(), bad, g.elements.size(), g.kappa_hat, g.K_hat);
  }
  report(3, "GMY contract", ok, detail);
}

void coverage() {
  bool ok = true;
  std::string detail;
  for (const auto& m : kMaps) {
    const Run& r = run(m, false);
    const Real left = 1 - r.partition.covered_fraction();
    const Real bound = (m == "doubling" || m == "tent") ? kCoverageTight : kCoverageLoose;
    const bool pass = left < bound && r.partition.n_max <= 60 && r.config.grid <= 4096;
    ok = ok && pass;
    detail += fmt("%s %.4Lf<%.2Lf (n_max %zu, %.0fs); ", m.c_str(), left, bound, r.partition.n_max, r.seconds);
  }
  report(4, "coverage", ok, detail);
}

void summability() {
  bool ok = true;
  std::string detail;
  for (const auto& m : kMaps) {
    const SummabilityReport s = satellite_summability(run(m, false).partition, kCauchyWindow, kCauchyTol);
    ok = ok && s.tail_spread < kCauchyTol;
    detail += fmt("%s %.2Le; ", m.c_str(), s.tail_spread);
  }
  report(5, "satellite summability", ok, detail);
}

void integrability() {
  bool ok = true;
  std::string detail;
  for (const auto& m : kRegular) {
    const auto& I = run(m, false).verification.integrability;
    if (!I) {
      ok = false;
      detail += m + " missing; ";
      continue;
    }
    ok = ok && I->max_pairwise <= kTriangleTol;
    detail += fmt("%s %.3Lf/%.3Lf/%.3Lf gap %.3Lf; ", m.c_str(), I->element_sum, I->birkhoff, I->lebesgue_tail,
                  I->max_pairwise);
  }
  report(6, "integrability triangle", ok, detail);
}

void key_ratio() {
  bool ok = true;
  std::string detail;
  for (const auto& m : kMaps) {
    const Run& r = run(m, false);
    std::vector<Real> ratios;
    for (const OrbitCounters& oc : r.verification.counters) {
      for (const CounterSample& s : oc.trace) {
        if (s.n >= 1000 && s.n <= 100000) ratios.push_back(static_cast<Real>(s.R) / static_cast<Real>(s.n));
      }
    }
    if (ratios.empty() || r.verification.counters.size() < 32) {
      ok = false;
      detail += m + " no samples; ";
      continue;
    }
    std::vector<Real> sorted = ratios;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const Real median = sorted[sorted.size() / 2];
    const Real lo = *std::min_element(ratios.begin(), ratios.end());
    ok = ok && median > 0 && lo >= kKeyRatioFactor * median;
    detail += fmt("%s min %.3Lf median %.3Lf; ", m.c_str(), lo, median);
  }
  report(7, "key ratio bound", ok, detail);
}

// R = 1 on two halves of [0,1] for the doubling map: F = f and the lift is nu itself.
bool unit_return_fixture(Real& err) {
  const MapSpec spec = make_doubling();
  InducedPartition P;
  P.base.Delta = {0, 1};
  P.base.DeltaPrime = {0, 1};
  for (Real lo : {0.0L, 0.5L}) {
    PartitionElement e;
    e.U = {lo, lo + 0.5L};
    e.R = 1;
    e.n = 1;
    P.elements.push_back(e);
  }
  P.reindex();
  DensityEstimate nu;
  nu.support = {0, 1};
  nu.role = DensityRole::NuInduced;
  Rng rng(7, 1);
  for (std::size_t i = 0; i < 256; ++i) nu.weights.push_back(rng.uniform_ext() + 0.1L);
  nu.normalize();
  LiftOptions lo;
  lo.bins = nu.bins();
  lo.samples = 10000;
  const DensityEstimate mu = lift_measure(nu, P, spec, lo);
  err = 0;
  for (std::size_t i = 0; i < nu.bins(); ++i) err = std::max(err, std::fabs(mu.weights[i] - nu.weights[i]));
  return err <= 8 * LDBL_EPSILON;
}

void lift_correctness() {
  const LiftResult& d = *run("doubling", true).lifted;
  const LiftResult& t = *run("tent", true).lifted;
  const LiftResult& l = *run("logistic", true).lifted;
  Real fixture_err = 0;
  const bool fixture = unit_return_fixture(fixture_err);
  const bool window_ok = l.window && std::fabs(l.window->lo - 0.05L) < 1e-12L && std::fabs(l.window->hi - 0.95L) < 1e-12L;
  const bool ok = d.l1_lifted_direct < kLiftTol && t.l1_lifted_direct < kLiftTol && l.l1_lifted_analytic &&
                  *l.l1_lifted_analytic < kLiftTol && window_ok && fixture;
  report(8, "lift correctness", ok,
         fmt("doubling %.4Lf tent %.4Lf logistic(analytic, [0.05,0.95]) %.4Lf; R=1 fixture max err %.1Le",
             d.l1_lifted_direct, t.l1_lifted_direct, l.l1_lifted_analytic ? *l.l1_lifted_analytic : -1.0L,
             fixture_err));
}

void abramov() {
  bool ok = true;
  std::string detail;
  for (const auto& m : kRegular) {
    const AbramovReport& a = run(m, false).verification.abramov;
    ok = ok && a.relative_error < kAbramovTol;
    detail += fmt("%s %.5Lf vs %.5Lf (%.4Lf); ", m.c_str(), a.lambda_F, a.predicted, a.relative_error);
  }
  report(9, "Abramov relation", ok, detail);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Relative path -> bytes of every file under dir.
std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
  }
  return out;
}

void determinism() {
  bool ok = true;
  std::string detail;
  for (const std::string m : {"doubling", "tent"}) {
    std::map<std::string, std::string> first;
    for (int k = 0; k < 2; ++k) {
      const fs::path out = fs::path(scratch) / (m + "_" + std::to_string(k));
      fs::remove_all(out);
      const std::string cmd = "\"" + cli + "\" all --config \"" + (fs::path(cfg_dir) / config_file(m)).string() +
                              "\" --out \"" + out.string() + "\" > /dev/null";
      const int rc = std::system(cmd.c_str());
      auto files = tree(out);
      if (rc != 0 || files.empty()) {
        ok = false;
        detail += fmt("%s run %d exit %d; ", m.c_str(), k, rc);
      }
      if (k == 0) {
        first = std::move(files);
      } else {
        std::size_t differ = first.size() == files.size() ? 0 : 1;
        for (const auto& [name, bytes] : first) {
          auto it = files.find(name);
          if (it == files.end() || it->second != bytes) ++differ;
        }
        ok = ok && differ == 0;
        detail += fmt("%s %zu files, %zu differ; ", m.c_str(), first.size(), differ);
      }
    }
  }
  report(10, "determinism", ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) cfg_dir = argv[1];
  if (argc > 2) cli = argv[2];
  if (argc > 3) scratch = argv[3];
  try {
    hyperbolic_oracle();
    doubling_suite();
    gmy_contract();
    coverage();
    summability();
    integrability();
    key_ratio();
    lift_correctness();
    abramov();
    determinism();
  } catch (const std::exception& e) {
    std::printf("[FAIL] aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
