#pragma once

#include <map>
#include <string>
#include <vector>

#include "lpp/classify.hpp"
#include "lpp/config.hpp"

namespace lpp {

struct CheckResult {
  std::string name;
  bool pass = false;
  double max_defect = 0.0;
  std::string detail;
};

struct IslandCensus {
  std::uint64_t seed = 0;
  int clean = 0;
  int flagged = 0;
  int dust_points = 0;
  int graph_points = 0;
  // clean islands per dyadic height bucket: bucket k holds heights in
  // [2^k, 2^(k+1))
  std::map<int, int> height_buckets;
};

struct DimensionEstimate {
  std::uint64_t seed = 0;
  int level = 0;
  int points = 0;
  double slope = 0.0;
};

// Everything one run produces besides the artifact files. Serialized to
// report.json except for timing, which goes to a sidecar so the report
// stays byte-identical across reruns of the same (config, seed).
struct RunReport {
  RunConfig config;
  std::vector<CheckResult> checks;
  std::vector<IslandCensus> islands;
  std::map<int, int> class_histogram;  // class id -> count, all seeds pooled
  std::vector<DimensionEstimate> dims;
  std::map<std::string, double> timing_ms;

  bool all_pass() const {
    for (const CheckResult& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

// Deterministic report body; excludes timing. Throws InconsistencyError if
// two checks share a name, so every enabled check appears exactly once.
std::string run_report_json(const RunReport& r);
std::string timing_json(const RunReport& r);

// One row per classified census point, sorted by (seed, level, x, sign).
// sign is "-", "+", or "." for the unsigned backend; age is the shock age
// in levels, -1 when censored by the window, and empty when the point
// carries no shock of that sign.
struct ShockCensusRow {
  std::uint64_t seed = 0;
  int level = 0;
  int x = 0;
  char sign = '.';
  int age = 0;
  bool has_age = false;
  int class_id = 0;
};
std::string shock_census_csv(const std::vector<ShockCensusRow>& rows);

// Minimal structural JSON-schema subset: type, properties, required,
// additionalProperties (bool), items, enum of strings. Throws
// InconsistencyError naming the offending path on the first violation.
void validate_against_schema(const std::string& doc_json,
                             const std::string& schema_json);

}  // namespace lpp
