#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lpp/environment.hpp"

namespace lpp {

// One run: an environment recipe, the field parameters, tolerances, the
// stage toggles, and where artifacts go. Parsed from flat dotted-key text;
// every field has a default so a config file only states deviations.
struct RunConfig {
  EnvParams env;

  double theta = 0.0;
  double delta_sep = 0.0;  // 0 selects the horizon-scaled default
  std::optional<SitePoint> anchor;

  double tol_eq = 1e-9;
  double tol_tie = 1e-9;
  double tol_flat = 1e-8;

  bool analyze_islands = true;
  bool analyze_interfaces = true;
  bool analyze_classify = true;
  bool analyze_dimension = false;
  bool render_enabled = true;

  std::string out_dir = "out";
  std::vector<std::uint64_t> seeds;  // empty: use env.seed alone
  int threads = 0;                   // 0: hardware concurrency

  // deterministic classify census strides (level step, x step)
  int census_level_step = 5;
  int census_x_step = 7;
};

// Parses flat `section.key = value` lines; '#' starts a comment, blank
// lines are skipped. Unknown keys are collected and reported together in
// one ParamError so a typo cannot silently fall back to a default. Value
// parse failures and violated invariants (non-positive tolerances,
// tol_flat < tol_eq, bad dimensions) also throw ParamError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Serializes every field; parse_config(dump_config(c)) reproduces c.
std::string dump_config(const RunConfig& c);

// Named baselines: "smoke" (seconds), "acceptance" (the full gate),
// "atlas" (a wide board for rendering). Throws ParamError on other names.
RunConfig preset_config(const std::string& name);

}  // namespace lpp
