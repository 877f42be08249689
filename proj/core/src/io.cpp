#include "gmy/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gmy {

namespace fs = std::filesystem;

namespace {

Json hex_pair(const Interval& iv) { return Json::array({hex_real(iv.lo), hex_real(iv.hi)}); }

Interval pair_of(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::Config, "expected an interval [lo, hi]");
  return {parse_real(j[0].get<std::string>()), parse_real(j[1].get<std::string>())};
}

Json set_json(const IntervalSet& s) {
  Json comps = Json::array();
  for (const Interval& iv : s.components()) comps.push_back(hex_pair(iv));
  return Json{{"wrap", s.wrap()}, {"components", comps}};
}

IntervalSet set_of(const Json& j) {
  std::vector<Interval> v;
  for (const Json& c : j.at("components")) v.push_back(pair_of(c));
  return IntervalSet(std::move(v), j.at("wrap").get<bool>());
}

Real hex_field(const Json& j, const char* key) { return parse_real(j.at(key).get<std::string>()); }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  return out;
}

double d(Real x) { return static_cast<double>(x); }

}  // namespace

std::string fixed(Real x, int digits) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.*Le", digits, x);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json(const std::string& path, const Json& doc) { write_text(path, doc.dump(2) + "\n"); }

Json read_json(const std::string& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Config, "malformed JSON in '" + path + "': " + e.what());
  }
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::string text = "# schema," + std::to_string(kSchemaVersion) + "\n";
  for (std::size_t i = 0; i < header.size(); ++i) text += (i ? "," : "") + header[i];
  text += "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) text += ',';
      text += r[i];
    }
    text += '\n';
  }
  write_text(path, text);
}

void save_partition(const std::string& dir, const std::string& map_name, const InducedPartition& P, Real alpha) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "partition";
  j["map"] = map_name;
  j["alpha"] = hex_real(alpha);
  j["base"] = to_json(P.base);
  j["params"] = to_json(P.params);
  j["n0"] = P.n0;
  j["n_max"] = P.n_max;
  j["grid_spacing"] = hex_real(P.grid_spacing);
  j["K0"] = hex_real(P.K0);
  j["D0"] = hex_real(P.D0);
  j["connector_depth"] = P.connector_depth;
  j["elements"] = P.elements.size();
  Json left = Json::array();
  for (Real x : P.leftover) left.push_back(hex_real(x));
  j["leftover"] = left;
  j["remainder"] = set_json(P.remainder);
  Json ledger = Json::array();
  for (const SatelliteStep& s : P.ledger.steps) {
    Json per = Json::array();
    for (const auto& [id, m] : s.per_element) per.push_back(Json::array({id, hex_real(m)}));
    ledger.push_back(Json{{"n", s.n},
                          {"S", set_json(s.S)},
                          {"measure", hex_real(s.measure)},
                          {"measure_outside", hex_real(s.measure_outside)},
                          {"per_element", per},
                          {"centers", s.centers},
                          {"hyperbolic_centers", s.hyperbolic_centers},
                          {"failed_preballs", s.failed_preballs},
                          {"candidates", s.candidates},
                          {"selected", s.selected},
                          {"unsaturated", s.unsaturated},
                          {"leftover", hex_real(s.leftover)}});
  }
  j["ledger"] = ledger;
  write_json((fs::path(dir) / "partition.json").string(), j);

  std::string text = "# schema," + std::to_string(kSchemaVersion) + "\n";
  text += "index,lo,hi,center,n,m,R,sharing,economy,v_lo,v_hi\n";
  for (std::size_t i = 0; i < P.elements.size(); ++i) {
    const PartitionElement& e = P.elements[i];
    text += std::to_string(i) + ',' + hex_real(e.U.lo) + ',' + hex_real(e.U.hi) + ',' + hex_real(e.center) + ',' +
            std::to_string(e.n) + ',' + std::to_string(e.m) + ',' + std::to_string(e.R) + ',' +
            std::to_string(e.sharing) + ',' + hex_real(e.economy) + ',' + hex_real(e.preball.v_n.lo) + ',' +
            hex_real(e.preball.v_n.hi) + '\n';
  }
  write_text((fs::path(dir) / "elements.csv").string(), text);
}

LoadedPartition load_partition(const std::string& dir) {
  const Json j = read_json((fs::path(dir) / "partition.json").string());
  LoadedPartition out;
  try {
    if (j.at("schema").get<int>() != kSchemaVersion) throw Error(ErrorKind::Config, "unsupported partition schema");
    out.map = j.at("map").get<std::string>();
    if (j.contains("alpha")) out.alpha = hex_field(j, "alpha");
    InducedPartition& P = out.partition;
    const Json& b = j.at("base");
    P.base.p = hex_field(b, "p");
    P.base.delta0 = hex_field(b, "delta0");
    P.base.delta1 = hex_field(b, "delta1");
    P.base.N0 = b.at("N0").get<std::size_t>();
    P.base.Delta = pair_of(b.at("Delta"));
    P.base.DeltaPrime = pair_of(b.at("DeltaPrime"));
    P.base.max_gap = hex_field(b, "max_gap");
    const Json& h = j.at("params");
    P.params.sigma = hex_field(h, "sigma");
    P.params.delta = hex_field(h, "delta");
    P.params.b = hex_field(h, "b");
    P.params.index_convention =
        h.at("index_convention").get<std::string>() == "shifted" ? IndexConvention::Shifted : IndexConvention::Paper;
    P.n0 = j.at("n0").get<std::size_t>();
    P.n_max = j.at("n_max").get<std::size_t>();
    P.grid_spacing = hex_field(j, "grid_spacing");
    P.K0 = hex_field(j, "K0");
    P.D0 = hex_field(j, "D0");
    P.connector_depth = j.at("connector_depth").get<std::size_t>();
    for (const Json& x : j.at("leftover")) P.leftover.push_back(parse_real(x.get<std::string>()));
    P.remainder = set_of(j.at("remainder"));
    for (const Json& s : j.at("ledger")) {
      SatelliteStep st;
      st.n = s.at("n").get<std::size_t>();
      st.S = set_of(s.at("S"));
      st.measure = hex_field(s, "measure");
      st.measure_outside = hex_field(s, "measure_outside");
      for (const Json& pe : s.at("per_element")) {
        st.per_element.emplace_back(pe.at(0).get<std::size_t>(), parse_real(pe.at(1).get<std::string>()));
      }
      st.centers = s.at("centers").get<std::size_t>();
      st.hyperbolic_centers = s.at("hyperbolic_centers").get<std::size_t>();
      st.failed_preballs = s.at("failed_preballs").get<std::size_t>();
      st.candidates = s.at("candidates").get<std::size_t>();
      st.selected = s.at("selected").get<std::size_t>();
      st.unsaturated = s.at("unsaturated").get<std::size_t>();
      st.leftover = hex_field(s, "leftover");
      P.ledger.steps.push_back(std::move(st));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Config, std::string("malformed partition.json: ") + e.what());
  }

  std::ifstream in((fs::path(dir) / "elements.csv").string());
  if (!in) throw Error(ErrorKind::Io, "cannot read elements.csv in '" + dir + "'");
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("index,", 0) == 0) continue;
    const auto f = split(line);
    if (f.size() != 11) throw Error(ErrorKind::Config, "elements.csv row " + std::to_string(row) + " has wrong arity");
    PartitionElement e;
    try {
      e.U = {parse_real(f[1]), parse_real(f[2])};
      e.center = parse_real(f[3]);
      e.n = std::stoull(f[4]);
      e.m = std::stoull(f[5]);
      e.R = std::stoull(f[6]);
      e.sharing = std::stoull(f[7]);
      e.economy = parse_real(f[8]);
      e.preball.v_n = {parse_real(f[9]), parse_real(f[10])};
      e.preball.center = e.center;
      e.preball.n = e.n;
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Config, "elements.csv row " + std::to_string(row) + " is malformed");
    }
    if (!(e.U.lo <= e.U.hi) || e.R == 0) {
      throw Error(ErrorKind::Config, "elements.csv row " + std::to_string(row) + " is not a valid element");
    }
    out.partition.elements.push_back(e);
    ++row;
  }
  if (out.partition.elements.size() != j.at("elements").get<std::size_t>()) {
    throw Error(ErrorKind::Config, "elements.csv does not match partition.json");
  }
  out.partition.reindex();
  return out;
}

void save_density(const std::string& path, const DensityEstimate& de) {
  std::string text = "# schema," + std::to_string(kSchemaVersion) + "\n";
  text += "# role," + std::string(to_string(de.role)) + ",support," + hex_real(de.support.lo) + ',' +
          hex_real(de.support.hi) + ",discarded," + fixed(de.discarded) + ",sweeps," + std::to_string(de.sweeps) +
          "\n";
  text += "bin_center,weight_K,weight\n";
  const Real K = static_cast<Real>(de.bins());
  for (std::size_t i = 0; i < de.bins(); ++i) {
    text += fixed(de.center(i)) + ',' + fixed(de.weights[i] * K) + ',' + hex_real(de.weights[i]) + '\n';
  }
  write_text(path, text);
}

DensityEstimate load_density(const std::string& path) {
  std::stringstream ss(read_text(path));
  DensityEstimate de;
  std::string line;
  bool have_support = false;
  while (std::getline(ss, line)) {
    if (line.rfind("# role,", 0) == 0) {
      const auto f = split(line);
      if (f.size() < 5) throw Error(ErrorKind::Config, "bad density header in '" + path + "'");
      const std::string role = f[1];
      de.role = role == "nu_induced" ? DensityRole::NuInduced
                : role == "mu_lifted" ? DensityRole::MuLifted
                : role == "analytic"  ? DensityRole::Analytic
                                      : DensityRole::MuDirect;
      de.support = {parse_real(f[3]), parse_real(f[4])};
      have_support = true;
      continue;
    }
    if (line.empty() || line[0] == '#' || line.rfind("bin_center", 0) == 0) continue;
    const auto f = split(line);
    if (f.size() != 3) throw Error(ErrorKind::Config, "bad density row in '" + path + "'");
    de.weights.push_back(parse_real(f[2]));
  }
  if (!have_support || de.weights.empty()) throw Error(ErrorKind::Config, "'" + path + "' holds no density");
  return de;
}

Json to_json(const NueReport& r) {
  Json curve = Json::array();
  for (const auto& [dl, v] : r.sr_curve) curve.push_back(Json::array({d(dl), d(v)}));
  return Json{{"lambda_hat", d(r.lambda_hat)}, {"sr_curve", curve}, {"n_power", r.n_power}, {"passed", r.passed}};
}

Json to_json(const HyperbolicParams& p) {
  return Json{{"sigma", hex_real(p.sigma)},
              {"delta", hex_real(p.delta)},
              {"b", hex_real(p.b)},
              {"index_convention", p.index_convention == IndexConvention::Paper ? "paper" : "shifted"},
              {"sigma_decimal", d(p.sigma)},
              {"delta_decimal", d(p.delta)},
              {"b_decimal", d(p.b)}};
}

Json to_json(const BaseDomain& b) {
  return Json{{"p", hex_real(b.p)},
              {"delta0", hex_real(b.delta0)},
              {"delta1", hex_real(b.delta1)},
              {"N0", b.N0},
              {"Delta", hex_pair(b.Delta)},
              {"DeltaPrime", hex_pair(b.DeltaPrime)},
              {"max_gap", hex_real(b.max_gap)},
              {"Delta_decimal", Json::array({d(b.Delta.lo), d(b.Delta.hi)})}};
}

Json to_json(const GmyReport& r, bool with_elements) {
  Json j{{"verified", r.verified()},
         {"kappa_hat", d(r.kappa_hat)},
         {"K_hat", d(r.K_hat)},
         {"full_branch_ok", r.full_branch_ok},
         {"kappa_target", d(r.kappa_target)},
         {"max_forward_error", d(r.max_forward_error)},
         {"min_R", r.min_R},
         {"elements", r.elements.size()},
         {"failures", r.failures}};
  if (with_elements) {
    Json rows = Json::array();
    for (const ElementCheck& c : r.elements) {
      rows.push_back(Json{{"element", c.element},
                          {"R", c.R},
                          {"forward_error", d(c.forward_error)},
                          {"min_expansion", d(c.min_expansion)},
                          {"distortion", d(c.distortion)}});
    }
    j["per_element"] = rows;
  }
  return j;
}

Json to_json(const SummabilityReport& r) {
  return Json{{"steps", r.steps.size()},
              {"total", r.partial_sums.empty() ? 0.0 : d(r.partial_sums.back())},
              {"window", r.window},
              {"tail_spread", d(r.tail_spread)},
              {"tolerance", d(r.tolerance)},
              {"cauchy", r.cauchy},
              {"decay_rate", d(r.decay_rate)},
              {"per_u_slope", d(r.per_u_slope)},
              {"per_u_bound", d(r.per_u_bound)},
              {"per_u_points", r.per_u_points},
              {"per_u_groups", r.per_u_groups}};
}

Json to_json(const EconomyReport& r) {
  Json steps = Json::array();
  for (const auto& [n, v] : r.per_step) steps.push_back(Json::array({n, d(v)}));
  return Json{{"C3_hat", d(r.max_ratio)},
              {"max_single_ratio", d(r.max_single)},
              {"max_sharing", r.max_sharing},
              {"per_step", steps}};
}

Json to_json(const IntegrabilityReport& r) {
  return Json{{"element_sum", d(r.element_sum)},
              {"birkhoff", d(r.birkhoff)},
              {"lebesgue_tail", d(r.lebesgue_tail)},
              {"lebesgue_mean", d(r.lebesgue_mean)},
              {"tail_identity_error", d(r.tail_identity_error)},
              {"tail_loglog_slope", d(r.tail_slope)},
              {"tail_exp_rate", d(r.tail_exp_rate)},
              {"covered_fraction", d(r.covered_fraction)},
              {"max_pairwise", d(r.max_pairwise)},
              {"tolerance", d(r.tolerance)},
              {"consistent", r.consistent}};
}

Json to_json(const AbramovReport& r) {
  return Json{{"lambda_F", d(r.lambda_F)},
              {"mean_R_orbit", d(r.mean_R_orbit)},
              {"mean_R_nu", d(r.mean_R_nu)},
              {"lambda_f", d(r.lambda_f)},
              {"predicted", d(r.predicted)},
              {"relative_error", d(r.relative_error)},
              {"tolerance", d(r.tolerance)},
              {"cycles", r.cycles},
              {"passed", r.passed}};
}

Json to_json(const OrbitCounters& c) {
  Json trace = Json::array();
  for (const CounterSample& s : c.trace) trace.push_back(Json::array({s.n, s.H, s.R, s.S}));
  return Json{{"x0", hex_real(c.x0)},
              {"remainder_hits", c.remainder_hits},
              {"truncated", c.truncated},
              {"truncated_at", c.truncated_at},
              {"key_ratio_inf", d(c.min_key_ratio())},
              {"trace", trace}};
}

}  // namespace gmy
