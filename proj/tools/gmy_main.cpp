// gmy: analyze -> induce -> verify -> lift, one stage per subcommand.
// Stages exchange files inside --out, so each can be rerun on its own.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gmy/pipeline.hpp"

namespace fs = std::filesystem;
using namespace gmy;

namespace {

enum Exit : int {
  kOk = 0,
  kInternal = 1,
  kConfigError = 2,
  kCoverage = 3,
  kInvalidPartition = 4,
  kInconsistent = 5,
};

struct Flags {
  std::string config;
  std::string out = "gmy_out";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  double coverage = 0.98;
};

RunConfig effective_config(const Flags& f) {
  RunConfig c = load_config(f.config);
  if (f.seed) c.seed = *f.seed;
  if (f.workers) c.workers = *f.workers;
  c.coverage_threshold = f.coverage;
  set_default_workers(c.workers);
  return c;
}

std::string at(const Flags& f, const std::string& name) { return (fs::path(f.out) / name).string(); }

std::string num(Real x) { return fixed(x, 12); }

int cmd_analyze(const Flags& f, const RunConfig& c, const MapSpec& spec) {
  const Analysis a = analyze(c, spec);
  write_text(at(f, "config.json"), dump_config(c));
  write_json(at(f, "analysis.json"), to_json(a));
  std::vector<std::vector<std::string>> rows;
  for (const auto& [d, v] : a.nue.sr_curve) rows.push_back({num(d), num(v)});
  write_csv(at(f, "sr_curve.csv"), {"delta", "mean_neg_log_dist"}, rows);
  std::printf("analyze %s: lambda_hat=%.12Lf N=%zu sigma=%.6Lf delta=%.6Lf b=%.4Lf N0=%zu n0=%zu\n",
              spec.name().c_str(), a.nue.lambda_hat, a.nue.n_power, a.params.sigma, a.params.delta, a.params.b,
              a.base.N0, a.n0);
  for (const auto& flag : a.flags) std::printf("  flag: %s\n", flag.c_str());
  return kOk;
}

Analysis load_or_analyze(const Flags& f, const RunConfig& c, const MapSpec& spec) {
  if (fs::exists(at(f, "analysis.json"))) return analysis_from_json(read_json(at(f, "analysis.json")));
  cmd_analyze(f, c, spec);
  return analysis_from_json(read_json(at(f, "analysis.json")));
}

int cmd_induce(const Flags& f, const RunConfig& c, const MapSpec& spec) {
  const Analysis a = load_or_analyze(f, c, spec);
  const InducedPartition P = induce(c, spec, a);
  save_partition(at(f, "partition"), spec.name(), P, c.alpha);
  std::vector<std::vector<std::string>> rows;
  Real acc = 0;
  for (const SatelliteStep& s : P.ledger.steps) {
    acc += s.measure;
    rows.push_back({std::to_string(s.n), num(s.measure), num(acc), num(s.leftover / P.base.Delta.length()),
                    std::to_string(s.centers), std::to_string(s.selected), std::to_string(s.unsaturated)});
  }
  write_csv(at(f, "ledger.csv"),
            {"n", "satellite_measure", "partial_sum", "leftover_fraction", "centers", "selected", "unsaturated"}, rows);
  const Real covered = P.covered_fraction();
  const bool ok = covered >= c.coverage_threshold;
  write_json(at(f, "induce.json"), Json{{"schema", kSchemaVersion},
                                        {"kind", "induce"},
                                        {"elements", P.elements.size()},
                                        {"n_max", P.n_max},
                                        {"covered_fraction", static_cast<double>(covered)},
                                        {"coverage_threshold", static_cast<double>(c.coverage_threshold)},
                                        {"coverage_ok", ok}});
  std::printf("induce %s: %zu elements, covered %.6Lf of Delta (threshold %.4Lf)\n", spec.name().c_str(),
              P.elements.size(), covered, c.coverage_threshold);
  if (!ok) {
    std::fprintf(stderr, "coverage %.6Lf below threshold %.4Lf\n", covered, c.coverage_threshold);
    return kCoverage;
  }
  return kOk;
}

int cmd_verify(const Flags& f, const RunConfig& c, const MapSpec& spec) {
  if (!fs::exists(at(f, "partition/partition.json"))) {
    throw Error(ErrorKind::Io, "no partition in '" + f.out + "'; run induce first");
  }
  if (!fs::exists(at(f, "analysis.json"))) throw Error(ErrorKind::Io, "no analysis.json in '" + f.out + "'");
  const LoadedPartition L = load_partition(at(f, "partition"));
  if (L.map != spec.name()) throw Error(ErrorKind::Config, "partition is for '" + L.map + "', config says '" + c.map + "'");
  const Analysis a = analysis_from_json(read_json(at(f, "analysis.json")));
  const Verification v = verify(c, spec, L.partition, a.nue.lambda_hat);

  write_json(at(f, "verify.json"), to_json(v));
  save_density(at(f, "nu.csv"), v.nu);
  std::vector<std::vector<std::string>> rows;
  for (const ElementCheck& e : v.gmy.elements) {
    rows.push_back({std::to_string(e.element), std::to_string(e.R), num(e.min_expansion), num(e.distortion),
                    num(e.forward_error), e.full_branch ? "1" : "0"});
  }
  write_csv(at(f, "verify_elements.csv"),
            {"element", "R", "min_expansion", "distortion", "forward_error", "full_branch"}, rows);
  if (v.integrability) {
    rows.clear();
    for (const auto& [n, t] : v.integrability->tail) rows.push_back({std::to_string(n), num(t)});
    write_csv(at(f, "return_tail.csv"), {"n", "leb_R_gt_n_fraction"}, rows);
  }
  if (v.summability) {
    rows.clear();
    for (std::size_t i = 0; i < v.summability->steps.size(); ++i) {
      rows.push_back({std::to_string(v.summability->steps[i]), num(v.summability->measures[i]),
                      num(v.summability->partial_sums[i])});
    }
    write_csv(at(f, "satellites.csv"), {"n", "measure", "partial_sum"}, rows);
  }
  rows.clear();
  for (std::size_t i = 0; i < v.counters.size(); ++i) {
    for (const CounterSample& s : v.counters[i].trace) {
      rows.push_back({std::to_string(i), std::to_string(s.n), std::to_string(s.H), std::to_string(s.R),
                      std::to_string(s.S)});
    }
  }
  write_csv(at(f, "counters.csv"), {"orbit", "n", "H", "R", "S"}, rows);

  std::printf("verify %s: kappa_hat=%.6Le K_hat=%.4Lf full_branch=%s (%zu failures)\n", spec.name().c_str(),
              v.gmy.kappa_hat, v.gmy.K_hat, v.gmy.full_branch_ok ? "yes" : "no", v.gmy.failures.size());
  if (v.integrability) {
    std::printf("  integral of R: elements %.4Lf, Birkhoff %.4Lf, tail %.4Lf (max gap %.3Lf)\n",
                v.integrability->element_sum, v.integrability->birkhoff, v.integrability->lebesgue_tail,
                v.integrability->max_pairwise);
  }
  std::printf("  Abramov: lambda_F=%.5Lf predicted=%.5Lf (rel. error %.4Lf)\n", v.abramov.lambda_F,
              v.abramov.predicted, v.abramov.relative_error);
  if (!v.gmy.full_branch_ok || !v.gmy.verified()) {
    std::fprintf(stderr, "partition is not a GMY structure; failing elements:");
    for (std::size_t i = 0; i < v.gmy.failures.size() && i < 50; ++i) std::fprintf(stderr, " %zu", v.gmy.failures[i]);
    std::fprintf(stderr, "\n");
    return kInvalidPartition;
  }
  if (!v.integrability) {
    std::fprintf(stderr, "%s\n", v.integrability_error.c_str());
    return kCoverage;
  }
  if (!v.integrability->consistent) {
    std::fprintf(stderr, "integrability estimates disagree by %.3Lf (> %.2Lf)\n", v.integrability->max_pairwise,
                 v.integrability->tolerance);
    return kInconsistent;
  }
  return kOk;
}

int cmd_lift(const Flags& f, const RunConfig& c, const MapSpec& spec) {
  if (!fs::exists(at(f, "partition/partition.json")) || !fs::exists(at(f, "nu.csv"))) {
    throw Error(ErrorKind::Io, "lift needs the partition and nu.csv in '" + f.out + "'; run induce and verify");
  }
  const LoadedPartition L = load_partition(at(f, "partition"));
  const DensityEstimate nu = load_density(at(f, "nu.csv"));
  const LiftResult r = lift(c, spec, L.partition, nu);
  save_density(at(f, "mu_lifted.csv"), r.mu_lifted);
  save_density(at(f, "mu_direct.csv"), r.mu_direct);
  if (r.analytic) save_density(at(f, "analytic.csv"), *r.analytic);
  write_json(at(f, "lift.json"), to_json(r));
  std::printf("lift %s: L1(lifted, direct)=%.5Lf", spec.name().c_str(), r.l1_lifted_direct);
  if (r.l1_lifted_analytic) std::printf(" L1(lifted, analytic)=%.5Lf", *r.l1_lifted_analytic);
  std::printf("\n");
  return kOk;
}

int cmd_all(const Flags& f, const RunConfig& c, const MapSpec& spec) {
  int code = cmd_analyze(f, c, spec);
  if (code == kOk) code = cmd_induce(f, c, spec);
  if (code == kOk) code = cmd_verify(f, c, spec);
  if (code == kOk) code = cmd_lift(f, c, spec);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gibbs-Markov-Young inducing schemes for one-dimensional maps"};
  app.require_subcommand(1);
  Flags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "run configuration (JSON)")->required();
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--seed", flags.seed, "override the config seed");
    sub->add_option("--workers", flags.workers, "thread cap (0: hardware)");
    sub->add_option("--coverage-threshold", flags.coverage, "minimal covered fraction of Delta")
        ->check(CLI::Range(0.0, 1.0));
  };
  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const Flags&, const RunConfig&, const MapSpec&);
  };
  const Sub subs[] = {
      {"analyze", "NUE/SR report and calibration", cmd_analyze},
      {"induce", "build the induced partition", cmd_induce},
      {"verify", "check the GMY contract, integrability and Abramov", cmd_verify},
      {"lift", "invariant densities and their distances", cmd_lift},
      {"all", "every stage in order", cmd_all},
  };
  std::vector<std::pair<CLI::App*, const Sub*>> handles;
  for (const Sub& s : subs) handles.emplace_back(app.add_subcommand(s.name, s.help), &s);
  for (auto& [h, s] : handles) add_common(h);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  try {
    const RunConfig config = effective_config(flags);
    const MapSpec spec = make_map(config);
    for (auto& [h, s] : handles) {
      if (h->parsed()) return s->run(flags, config, spec);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "gmy: %s\n", e.what());
    switch (e.kind()) {
      case ErrorKind::Config:
      case ErrorKind::Io:
      case ErrorKind::NotFound:
      case ErrorKind::Calibration:
      case ErrorKind::SearchFailure:
        return kConfigError;
      case ErrorKind::Coverage:
        return kCoverage;
      case ErrorKind::EmptyPartition:
        return kInvalidPartition;
      default:
        return kInternal;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "gmy: %s\n", e.what());
    return kInternal;
  }
  return kInternal;
}
