#include "gmy/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gmy {

MapSpec make_map(const RunConfig& config) { return make_builtin(config.map, config.alpha); }

Analysis analyze(const RunConfig& c, const MapSpec& spec) {
  Analysis a;
  std::vector<OrbitBuffer> orbits(c.analysis_orbits);
  Rng starts(c.seed, 0x616e616c79ULL);
  std::vector<Real> x0(c.analysis_orbits);
  for (Real& x : x0) x = starts.uniform_ext();
  parallel_for(orbits.size(), c.workers, [&](std::size_t i) {
    orbits[i] = iterate_orbit(spec, x0[i], c.analysis_length, 1, c.seed * 0x9e3779b97f4a7c15ULL + i + 1);
  });
  a.nue = nue_report(spec, orbits, c.delta_grid);
  const bool full_override = c.sigma && c.delta && c.b;
  try {
    a.calibrated = calibrate_params(spec, a.nue);
  } catch (const Error& e) {
    if (!full_override) throw;
    a.flags.push_back(std::string("calibration skipped: ") + e.what());
  }
  a.params = a.calibrated;
  if (c.sigma) a.params.sigma = *c.sigma;
  if (c.delta) a.params.delta = *c.delta;
  if (c.b) a.params.b = *c.b;
  a.params.index_convention = c.index_convention;
  const auto& nd = spec.nondegeneracy();
  const Real beta = nd.kind == CriticalKind::Bounded ? 1 : nd.beta;
  a.params.validate(beta);
  if (spec.name() == "manneville_pomeau" && c.alpha >= 1) {
    a.flags.push_back("alpha >= 1: outside the integrable regime, lambda_hat is diagnostic only");
  }
  const BaseOptions bo = c.base_options();
  a.base = c.p ? base_from_point(spec, *c.p, bo) : find_base_point(spec, bo);
  const ConnectorTree tree = build_connector_tree(spec, a.base, c.connector_depth);
  a.K0 = tree.K0;
  if (c.n0) {
    a.n0 = *c.n0;
  } else {
    a.n0 = default_n0(a.K0, a.params.sigma, a.base.N0);
    a.n0_defaulted = true;
  }
  if (a.n0 > c.n_max) throw Error(ErrorKind::Config, "n0 = " + std::to_string(a.n0) + " exceeds n_max");
  return a;
}

InducedPartition induce(const RunConfig& c, const MapSpec& spec, const Analysis& a) {
  InducingOptions o;
  o.n0 = a.n0;
  o.n_max = c.n_max;
  o.grid = c.grid;
  o.connector_depth = c.connector_depth;
  o.seed = c.seed;
  o.workers = c.workers;
  return run_inducing(spec, a.base, a.params, o);
}

bool Verification::passed() const { return gmy.verified() && integrability && integrability->consistent; }

std::vector<std::size_t> counter_horizons(std::size_t n) {
  std::vector<std::size_t> h;
  for (std::size_t t : {std::size_t(10), std::size_t(100)}) {
    if (t < n) h.push_back(t);
  }
  for (std::size_t t = 1000; t < n; t += 1000) h.push_back(t);
  h.push_back(n);
  return h;
}

Verification verify(const RunConfig& c, const MapSpec& spec, const InducedPartition& P, Real lambda_f) {
  Verification v;
  v.gmy = check_gmy(spec, P, c.samples_per_element, c.seed, c.workers);
  if (P.ledger.steps.size() >= 10) v.summability = satellite_summability(P);
  v.economy = preball_economy(P);

  UlamOptions uo;
  uo.bins = c.bins;
  uo.samples_per_bin = c.ulam_samples;
  uo.seed = c.seed;
  uo.workers = c.workers;
  v.nu = ulam_density(spec, P, uo);

  const auto starts = sample_density(v.nu, c.orbits, c.seed ^ 0x636f756e74ULL);
  const auto horizons = counter_horizons(c.orbit_length);
  v.counters.resize(starts.size());
  parallel_for(starts.size(), c.workers, [&](std::size_t i) {
    OrbitOptions o;
    o.horizons = horizons;
    o.seed = c.seed * 0x2545f4914f6cdd1dULL + i + 1;
    v.counters[i] = orbit_counters(spec, P, P.params, starts[i], c.orbit_length, o);
  });
  v.key_ratio_inf = std::numeric_limits<Real>::infinity();
  for (const OrbitCounters& oc : v.counters) v.key_ratio_inf = std::min(v.key_ratio_inf, oc.min_key_ratio());
  if (v.counters.empty()) v.key_ratio_inf = 0;

  try {
    v.integrability = integrability_check(P, v.nu, v.counters, c.coverage_threshold);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Coverage) throw;
    v.integrability_error = e.what();
  }

  AbramovOptions ao;
  ao.orbits = c.abramov_orbits;
  ao.length = c.abramov_length;
  ao.seed = c.seed + 0x61627261ULL;
  ao.workers = c.workers;
  v.abramov = abramov_check(spec, P, v.nu, lambda_f, ao);
  return v;
}

LiftResult lift(const RunConfig& c, const MapSpec& spec, const InducedPartition& P, const DensityEstimate& nu) {
  LiftResult r;
  LiftOptions lo;
  lo.bins = c.bins;
  lo.samples = c.lift_samples;
  lo.seed = c.seed;
  lo.workers = c.workers;
  r.mu_lifted = lift_measure(nu, P, spec, lo);
  UlamOptions uo;
  uo.bins = c.bins;
  uo.samples_per_bin = c.ulam_samples;
  uo.seed = c.seed;
  uo.workers = c.workers;
  r.mu_direct = ulam_density(spec, uo);
  r.l1_lifted_direct = density_distance(r.mu_lifted, r.mu_direct);
  if (c.lift_window_lo) r.window = Interval{*c.lift_window_lo, *c.lift_window_hi};
  if (analytic_cdf(spec.name())) {
    r.analytic = analytic_density(spec.name(), c.bins);
    if (r.window) {
      r.l1_lifted_analytic = density_distance(r.mu_lifted, *r.analytic, *r.window);
      r.l1_direct_analytic = density_distance(r.mu_direct, *r.analytic, *r.window);
    } else {
      r.l1_lifted_analytic = density_distance(r.mu_lifted, *r.analytic);
      r.l1_direct_analytic = density_distance(r.mu_direct, *r.analytic);
    }
  }
  return r;
}

Json to_json(const Analysis& a) {
  Json flags = Json::array();
  for (const auto& f : a.flags) flags.push_back(f);
  return Json{{"schema", kSchemaVersion},
              {"kind", "analysis"},
              {"nue", to_json(a.nue)},
              {"calibrated", to_json(a.calibrated)},
              {"params", to_json(a.params)},
              {"base", to_json(a.base)},
              {"K0", static_cast<double>(a.K0)},
              {"K0_hex", hex_real(a.K0)},
              {"n0", a.n0},
              {"n0_defaulted", a.n0_defaulted},
              {"lambda_hat_hex", hex_real(a.nue.lambda_hat)},
              {"flags", flags}};
}

namespace {

Real hexed(const Json& j, const char* key) { return parse_real(j.at(key).get<std::string>()); }

HyperbolicParams params_from(const Json& h) {
  HyperbolicParams p;
  p.sigma = hexed(h, "sigma");
  p.delta = hexed(h, "delta");
  p.b = hexed(h, "b");
  p.index_convention =
      h.at("index_convention").get<std::string>() == "shifted" ? IndexConvention::Shifted : IndexConvention::Paper;
  return p;
}

Interval interval_from(const Json& j) {
  return {parse_real(j.at(0).get<std::string>()), parse_real(j.at(1).get<std::string>())};
}

}  // namespace

Analysis analysis_from_json(const Json& j) {
  Analysis a;
  try {
    if (j.at("schema").get<int>() != kSchemaVersion || j.at("kind") != "analysis") {
      throw Error(ErrorKind::Config, "not an analysis file of schema " + std::to_string(kSchemaVersion));
    }
    a.nue.lambda_hat = hexed(j, "lambda_hat_hex");
    a.nue.n_power = j.at("nue").at("n_power").get<std::size_t>();
    a.nue.passed = j.at("nue").at("passed").get<bool>();
    for (const Json& pt : j.at("nue").at("sr_curve")) {
      a.nue.sr_curve.emplace_back(pt.at(0).get<double>(), pt.at(1).get<double>());
    }
    a.calibrated = params_from(j.at("calibrated"));
    a.params = params_from(j.at("params"));
    const Json& b = j.at("base");
    a.base.p = hexed(b, "p");
    a.base.delta0 = hexed(b, "delta0");
    a.base.delta1 = hexed(b, "delta1");
    a.base.N0 = b.at("N0").get<std::size_t>();
    a.base.Delta = interval_from(b.at("Delta"));
    a.base.DeltaPrime = interval_from(b.at("DeltaPrime"));
    a.base.max_gap = hexed(b, "max_gap");
    a.K0 = hexed(j, "K0_hex");
    a.n0 = j.at("n0").get<std::size_t>();
    a.n0_defaulted = j.at("n0_defaulted").get<bool>();
    for (const Json& f : j.at("flags")) a.flags.push_back(f.get<std::string>());
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Config, std::string("malformed analysis file: ") + e.what());
  }
  return a;
}

Json to_json(const Verification& v) {
  Json j{{"schema", kSchemaVersion}, {"kind", "verification"}, {"passed", v.passed()}, {"gmy", to_json(v.gmy)}};
  j["summability"] = v.summability ? to_json(*v.summability) : Json(nullptr);
  j["economy"] = to_json(v.economy);
  j["nu_discarded"] = static_cast<double>(v.nu.discarded);
  j["integrability"] = v.integrability ? to_json(*v.integrability) : Json(nullptr);
  if (!v.integrability_error.empty()) j["integrability_error"] = v.integrability_error;
  j["abramov"] = to_json(v.abramov);
  j["key_ratio_inf"] = static_cast<double>(v.key_ratio_inf);
  j["satellite_counting"] = "cycle starts inside a recorded S_j for an earlier step j";
  return j;
}

Json to_json(const LiftResult& l) {
  Json j{{"schema", kSchemaVersion}, {"kind", "lift"}, {"l1_lifted_direct", static_cast<double>(l.l1_lifted_direct)}};
  j["l1_lifted_analytic"] = l.l1_lifted_analytic ? Json(static_cast<double>(*l.l1_lifted_analytic)) : Json(nullptr);
  j["l1_direct_analytic"] = l.l1_direct_analytic ? Json(static_cast<double>(*l.l1_direct_analytic)) : Json(nullptr);
  j["window"] = l.window ? Json::array({static_cast<double>(l.window->lo), static_cast<double>(l.window->hi)})
                         : Json(nullptr);
  return j;
}

}  // namespace gmy
