#pragma once

#include <string>
#include <vector>

#include "gmy/config.hpp"
#include "gmy/measures.hpp"
#include "gmy/verify.hpp"
#include "json.hpp"

namespace gmy {

using Json = nlohmann::ordered_json;

/// Writes `text` to `path`, creating parent directories. Errors: io.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

void write_json(const std::string& path, const Json& doc);
Json read_json(const std::string& path);

/// CSV with a leading "# schema,<version>" line.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// partition.json (base, parameters, ledger) and elements.csv in `dir`.
/// Endpoints are written in hex so a reload is exact.
void save_partition(const std::string& dir, const std::string& map_name, const InducedPartition& partition,
                    Real alpha = 0.5L);

struct LoadedPartition {
  std::string map;
  Real alpha = 0.5L;
  InducedPartition partition;
};

/// Errors: io (missing files), config (malformed content).
LoadedPartition load_partition(const std::string& dir);

void save_density(const std::string& path, const DensityEstimate& d);
DensityEstimate load_density(const std::string& path);

Json to_json(const NueReport& r);
Json to_json(const HyperbolicParams& p);
Json to_json(const BaseDomain& b);
Json to_json(const GmyReport& r, bool with_elements = false);
Json to_json(const SummabilityReport& r);
Json to_json(const EconomyReport& r);
Json to_json(const IntegrabilityReport& r);
Json to_json(const AbramovReport& r);
Json to_json(const OrbitCounters& c);

/// Fixed-width decimal text, so output files do not depend on locale or on
/// the shortest-round-trip formatter.
std::string fixed(Real x, int digits = 12);

}  // namespace gmy
