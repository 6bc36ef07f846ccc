#include "lpp/report.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lpp/errors.hpp"
#include "lpp/numerics.hpp"
#include "lpp/prng.hpp"

namespace lpp {

namespace {

nlohmann::json check_json(const CheckResult& c) {
  return {{"name", c.name},
          {"pass", c.pass},
          {"max_defect", c.max_defect},
          {"detail", c.detail}};
}

nlohmann::json census_json(const IslandCensus& c) {
  nlohmann::json buckets = nlohmann::json::object();
  for (const auto& [k, n] : c.height_buckets) {
    buckets[std::to_string(k)] = n;
  }
  return {{"seed", c.seed},
          {"clean", c.clean},
          {"flagged", c.flagged},
          {"dust_points", c.dust_points},
          {"graph_points", c.graph_points},
          {"height_buckets", std::move(buckets)}};
}

}  // namespace

std::string run_report_json(const RunReport& r) {
  std::set<std::string> names;
  for (const CheckResult& c : r.checks) {
    if (!names.insert(c.name).second) {
      throw InconsistencyError("run_report_json: duplicate check: " + c.name);
    }
  }

  nlohmann::json j;
  j["format"] = "report-1";
  j["prng_id"] = prng_id;
  j["config"] = dump_config(r.config);

  nlohmann::json checks = nlohmann::json::array();
  for (const CheckResult& c : r.checks) checks.push_back(check_json(c));
  j["checks"] = std::move(checks);
  j["all_pass"] = r.all_pass();

  nlohmann::json islands = nlohmann::json::array();
  for (const IslandCensus& c : r.islands) islands.push_back(census_json(c));
  j["islands"] = std::move(islands);

  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [id, n] : r.class_histogram) {
    hist[std::to_string(id)] = n;
  }
  j["class_histogram"] = std::move(hist);

  nlohmann::json dims = nlohmann::json::array();
  for (const DimensionEstimate& d : r.dims) {
    dims.push_back({{"seed", d.seed},
                    {"level", d.level},
                    {"points", d.points},
                    {"slope", d.slope}});
  }
  j["dimension"] = std::move(dims);
  return j.dump(2) + "\n";
}

std::string timing_json(const RunReport& r) {
  nlohmann::json t = nlohmann::json::object();
  for (const auto& [k, ms] : r.timing_ms) t[k] = ms;
  nlohmann::json j;
  j["format"] = "timing-1";
  j["timing_ms"] = std::move(t);
  return j.dump(2) + "\n";
}

std::string shock_census_csv(const std::vector<ShockCensusRow>& rows) {
  std::vector<const ShockCensusRow*> sorted;
  sorted.reserve(rows.size());
  for (const ShockCensusRow& r : rows) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ShockCensusRow* a, const ShockCensusRow* b) {
                     if (a->seed != b->seed) return a->seed < b->seed;
                     if (a->level != b->level) return a->level < b->level;
                     if (a->x != b->x) return a->x < b->x;
                     return a->sign < b->sign;
                   });
  std::ostringstream out;
  out << "level,x,sign,age,class_id\n";
  for (const ShockCensusRow* r : sorted) {
    out << r->level << ',' << r->x << ',' << r->sign << ',';
    if (r->has_age) out << r->age;
    out << ',' << r->class_id << '\n';
  }
  return out.str();
}

namespace {

std::string json_type_name(const nlohmann::json& v) {
  if (v.is_object()) return "object";
  if (v.is_array()) return "array";
  if (v.is_string()) return "string";
  if (v.is_boolean()) return "boolean";
  if (v.is_null()) return "null";
  if (v.is_number_integer() || v.is_number_unsigned()) return "integer";
  return "number";
}

bool type_matches(const nlohmann::json& v, const std::string& want) {
  const std::string got = json_type_name(v);
  if (want == got) return true;
  // every integer is also a number
  return want == "number" && got == "integer";
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InconsistencyError("schema: " + (path.empty() ? "/" : path) + ": " +
                           what);
}

void validate_node(const nlohmann::json& v, const nlohmann::json& schema,
                   const std::string& path) {
  if (!schema.is_object()) fail(path, "schema node is not an object");

  if (auto it = schema.find("type"); it != schema.end()) {
    const std::string want = it->get<std::string>();
    if (!type_matches(v, want)) {
      fail(path, "expected " + want + ", got " + json_type_name(v));
    }
  }

  if (auto it = schema.find("enum"); it != schema.end()) {
    bool hit = false;
    for (const nlohmann::json& allowed : *it) {
      if (v == allowed) {
        hit = true;
        break;
      }
    }
    if (!hit) fail(path, "value not in enum");
  }

  if (v.is_object()) {
    const auto props = schema.find("properties");
    if (auto req = schema.find("required"); req != schema.end()) {
      for (const nlohmann::json& key : *req) {
        if (!v.contains(key.get<std::string>())) {
          fail(path, "missing required key " + key.get<std::string>());
        }
      }
    }
    const auto extra = schema.find("additionalProperties");
    const bool allow_extra = extra == schema.end() || extra->get<bool>();
    for (const auto& [key, child] : v.items()) {
      const nlohmann::json* sub = nullptr;
      if (props != schema.end()) {
        if (auto p = props->find(key); p != props->end()) sub = &*p;
      }
      if (sub != nullptr) {
        validate_node(child, *sub, path + "/" + key);
      } else if (!allow_extra) {
        fail(path, "unexpected key " + key);
      }
    }
  }

  if (v.is_array()) {
    if (auto items = schema.find("items"); items != schema.end()) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        validate_node(v[i], *items, path + "/" + std::to_string(i));
      }
    }
  }
}

}  // namespace

void validate_against_schema(const std::string& doc_json,
                             const std::string& schema_json) {
  nlohmann::json doc;
  nlohmann::json schema;
  try {
    doc = nlohmann::json::parse(doc_json);
  } catch (const nlohmann::json::exception& e) {
    throw InconsistencyError(std::string("schema: document is not JSON: ") +
                             e.what());
  }
  try {
    schema = nlohmann::json::parse(schema_json);
  } catch (const nlohmann::json::exception& e) {
    throw InconsistencyError(std::string("schema: schema is not JSON: ") +
                             e.what());
  }
  validate_node(doc, schema, "");
}

}  // namespace lpp
