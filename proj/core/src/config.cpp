#include "gmy/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace gmy {

using nlohmann::json;

namespace {

Real real_of(const json& v, const std::string& key) {
  if (v.is_number()) return static_cast<Real>(v.get<double>());
  if (v.is_string()) return parse_real(v.get<std::string>());
  throw Error(ErrorKind::Config, "'" + key + "' must be a number or a numeric string");
}

std::size_t count_of(const json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw Error(ErrorKind::Config, "'" + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

bool flag_of(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw Error(ErrorKind::Config, "'" + key + "' must be true or false");
  return v.get<bool>();
}

json real_json(Real x) {
  // Values that survive a trip through double are written as numbers.
  if (static_cast<Real>(static_cast<double>(x)) == x) return static_cast<double>(x);
  return hex_real(x);
}

}  // namespace

std::string hex_real(Real x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%La", x);
  return buf;
}

Real parse_real(const std::string& text) {
  const char* s = text.c_str();
  char* end = nullptr;
  const Real v = std::strtold(s, &end);
  if (end == s || *end != '\0') throw Error(ErrorKind::Config, "not a number: '" + text + "'");
  return v;
}

BaseOptions RunConfig::base_options() const {
  BaseOptions o;
  o.delta1 = delta1;
  o.delta0 = delta0.value_or(0);
  o.strict_delta0 = strict_delta0;
  o.depth_max = depth_max;
  o.grid = base_grid;
  o.dyadic_bits = dyadic_bits;
  return o;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::Config, "config must be a JSON object");
  RunConfig c;
  if (j.contains("schema") && j["schema"] != kSchemaVersion) {
    throw Error(ErrorKind::Config, "unsupported schema version " + j["schema"].dump());
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const json& v = it.value();
    if (k == "schema" || k == "comment") continue;
    if (k == "map") {
      if (!v.is_string()) throw Error(ErrorKind::Config, "'map' must be a string");
      c.map = v.get<std::string>();
    } else if (k == "alpha") c.alpha = real_of(v, k);
    else if (k == "analysis_orbits") c.analysis_orbits = count_of(v, k);
    else if (k == "analysis_length") c.analysis_length = count_of(v, k);
    else if (k == "delta_grid") {
      if (!v.is_array() || v.empty()) throw Error(ErrorKind::Config, "'delta_grid' must be a non-empty array");
      c.delta_grid.clear();
      for (const json& x : v) c.delta_grid.push_back(real_of(x, k));
    } else if (k == "delta1") c.delta1 = real_of(v, k);
    else if (k == "delta0") c.delta0 = real_of(v, k);
    else if (k == "p") c.p = real_of(v, k);
    else if (k == "strict_delta0") c.strict_delta0 = flag_of(v, k);
    else if (k == "dyadic_bits") c.dyadic_bits = count_of(v, k);
    else if (k == "depth_max") c.depth_max = count_of(v, k);
    else if (k == "base_grid") c.base_grid = count_of(v, k);
    else if (k == "sigma") c.sigma = real_of(v, k);
    else if (k == "delta") c.delta = real_of(v, k);
    else if (k == "b") c.b = real_of(v, k);
    else if (k == "index_convention") {
      const std::string s = v.is_string() ? v.get<std::string>() : "";
      if (s == "paper") c.index_convention = IndexConvention::Paper;
      else if (s == "shifted") c.index_convention = IndexConvention::Shifted;
      else throw Error(ErrorKind::Config, "'index_convention' must be \"paper\" or \"shifted\"");
    } else if (k == "n0") c.n0 = count_of(v, k);
    else if (k == "n_max") c.n_max = count_of(v, k);
    else if (k == "grid") c.grid = count_of(v, k);
    else if (k == "connector_depth") c.connector_depth = count_of(v, k);
    else if (k == "samples_per_element") c.samples_per_element = count_of(v, k);
    else if (k == "orbits") c.orbits = count_of(v, k);
    else if (k == "orbit_length") c.orbit_length = count_of(v, k);
    else if (k == "abramov_orbits") c.abramov_orbits = count_of(v, k);
    else if (k == "abramov_length") c.abramov_length = count_of(v, k);
    else if (k == "bins") c.bins = count_of(v, k);
    else if (k == "ulam_samples") c.ulam_samples = count_of(v, k);
    else if (k == "lift_samples") c.lift_samples = count_of(v, k);
    else if (k == "lift_window") {
      if (!v.is_array() || v.size() != 2) throw Error(ErrorKind::Config, "'lift_window' must be [lo, hi]");
      c.lift_window_lo = real_of(v[0], k);
      c.lift_window_hi = real_of(v[1], k);
    } else if (k == "seed") {
      if (!v.is_number_unsigned()) throw Error(ErrorKind::Config, "'seed' must be an unsigned integer");
      c.seed = v.get<std::uint64_t>();
    } else if (k == "workers") c.workers = static_cast<unsigned>(count_of(v, k));
    else if (k == "coverage_threshold") c.coverage_threshold = real_of(v, k);
    else throw Error(ErrorKind::Config, "unknown key '" + k + "'");
  }
  if (!(c.delta1 > 0)) throw Error(ErrorKind::Config, "delta1 must be positive");
  if (c.n_max == 0 || (c.n0 && *c.n0 > c.n_max)) throw Error(ErrorKind::Config, "need 1 <= n0 <= n_max");
  if (c.n0 && *c.n0 == 0) throw Error(ErrorKind::Config, "n0 must be at least 1");
  if (c.grid == 0 || c.bins == 0) throw Error(ErrorKind::Config, "grid and bins must be positive");
  if (!(c.coverage_threshold >= 0 && c.coverage_threshold <= 1)) {
    throw Error(ErrorKind::Config, "coverage_threshold must lie in [0,1]");
  }
  if (c.lift_window_lo && !(*c.lift_window_lo < *c.lift_window_hi)) {
    throw Error(ErrorKind::Config, "lift_window must satisfy lo < hi");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const RunConfig& c) {
  json j;
  j["schema"] = kSchemaVersion;
  j["map"] = c.map;
  j["alpha"] = real_json(c.alpha);
  j["analysis_orbits"] = c.analysis_orbits;
  j["analysis_length"] = c.analysis_length;
  json grid = json::array();
  for (Real d : c.delta_grid) grid.push_back(real_json(d));
  j["delta_grid"] = grid;
  j["delta1"] = real_json(c.delta1);
  if (c.delta0) j["delta0"] = real_json(*c.delta0);
  if (c.p) j["p"] = real_json(*c.p);
  j["strict_delta0"] = c.strict_delta0;
  j["dyadic_bits"] = c.dyadic_bits;
  j["depth_max"] = c.depth_max;
  j["base_grid"] = c.base_grid;
  if (c.sigma) j["sigma"] = real_json(*c.sigma);
  if (c.delta) j["delta"] = real_json(*c.delta);
  if (c.b) j["b"] = real_json(*c.b);
  j["index_convention"] = c.index_convention == IndexConvention::Paper ? "paper" : "shifted";
  if (c.n0) j["n0"] = *c.n0;
  j["n_max"] = c.n_max;
  j["grid"] = c.grid;
  j["connector_depth"] = c.connector_depth;
  j["samples_per_element"] = c.samples_per_element;
  j["orbits"] = c.orbits;
  j["orbit_length"] = c.orbit_length;
  j["abramov_orbits"] = c.abramov_orbits;
  j["abramov_length"] = c.abramov_length;
  j["bins"] = c.bins;
  j["ulam_samples"] = c.ulam_samples;
  j["lift_samples"] = c.lift_samples;
  if (c.lift_window_lo) j["lift_window"] = {real_json(*c.lift_window_lo), real_json(*c.lift_window_hi)};
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["coverage_threshold"] = real_json(c.coverage_threshold);
  return j.dump(2) + "\n";
}

}  // namespace gmy
