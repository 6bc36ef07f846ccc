#include "lpp/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "lpp/numerics.hpp"

namespace lpp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (errno != 0 || end == v.c_str() || *end != '\0') {
    throw ParamError("config: key '" + key + "' expects a number, got '" + v +
                     "'");
  }
  return d;
}

long long parse_int(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long long n = std::strtoll(v.c_str(), &end, 10);
  if (errno != 0 || end == v.c_str() || *end != '\0') {
    throw ParamError("config: key '" + key + "' expects an integer, got '" +
                     v + "'");
  }
  return n;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParamError("config: key '" + key + "' expects a boolean, got '" + v +
                   "'");
}

std::vector<std::uint64_t> parse_seed_list(const std::string& key,
                                           const std::string& v) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(
        static_cast<std::uint64_t>(parse_int(key, item)));
  }
  return out;
}

void validate(const RunConfig& c) {
  if (c.env.n_levels < 1) {
    throw ParamError("config: env.levels must be at least 1");
  }
  if (c.env.kind == EnvKind::Exponential) {
    if (c.env.n_cols < 1) {
      throw ParamError("config: env.cols must be at least 1");
    }
  } else {
    if (!(c.env.mesh > 0.0)) {
      throw ParamError("config: env.mesh must be positive");
    }
    if (!(c.env.x_min < c.env.x_max)) {
      throw ParamError("config: env.x_min must be below env.x_max");
    }
  }
  if (!(c.tol_eq > 0.0) || !(c.tol_tie > 0.0) || !(c.tol_flat > 0.0)) {
    throw ParamError("config: tolerances must be positive");
  }
  if (c.tol_flat < c.tol_eq) {
    throw ParamError("config: tol.flat must be at least tol.eq");
  }
  if (!(c.delta_sep >= 0.0)) {
    throw ParamError("config: busemann.delta_sep must be non-negative");
  }
  if (c.threads < 0) {
    throw ParamError("config: run.threads must be non-negative");
  }
  if (c.census_level_step < 1 || c.census_x_step < 1) {
    throw ParamError("config: census strides must be positive");
  }
  if (c.out_dir.empty()) {
    throw ParamError("config: out.dir must not be empty");
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  c.env.kind = EnvKind::SemiDiscrete;
  std::optional<int> anchor_level;
  std::optional<double> anchor_x;

  std::vector<std::string> unknown;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParamError("config: line " + std::to_string(lineno) +
                       " is not 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) {
      throw ParamError("config: line " + std::to_string(lineno) +
                       " has an empty key or value");
    }

    if (key == "env.kind") {
      if (val == "exp") {
        c.env.kind = EnvKind::Exponential;
      } else if (val == "semi") {
        c.env.kind = EnvKind::SemiDiscrete;
      } else {
        throw ParamError("config: env.kind must be 'exp' or 'semi', got '" +
                         val + "'");
      }
    } else if (key == "env.seed") {
      c.env.seed = static_cast<std::uint64_t>(parse_int(key, val));
    } else if (key == "env.levels") {
      c.env.n_levels = static_cast<int>(parse_int(key, val));
    } else if (key == "env.cols") {
      c.env.n_cols = static_cast<int>(parse_int(key, val));
    } else if (key == "env.rate") {
      c.env.rate = parse_double(key, val);
    } else if (key == "env.mesh") {
      c.env.mesh = parse_double(key, val);
    } else if (key == "env.x_min") {
      c.env.x_min = parse_double(key, val);
    } else if (key == "env.x_max") {
      c.env.x_max = parse_double(key, val);
    } else if (key == "busemann.theta") {
      c.theta = parse_double(key, val);
    } else if (key == "busemann.delta_sep") {
      c.delta_sep = parse_double(key, val);
    } else if (key == "busemann.anchor_level") {
      anchor_level = static_cast<int>(parse_int(key, val));
    } else if (key == "busemann.anchor_x") {
      anchor_x = parse_double(key, val);
    } else if (key == "tol.eq") {
      c.tol_eq = parse_double(key, val);
    } else if (key == "tol.tie") {
      c.tol_tie = parse_double(key, val);
    } else if (key == "tol.flat") {
      c.tol_flat = parse_double(key, val);
    } else if (key == "analyze.islands") {
      c.analyze_islands = parse_bool(key, val);
    } else if (key == "analyze.interfaces") {
      c.analyze_interfaces = parse_bool(key, val);
    } else if (key == "analyze.classify") {
      c.analyze_classify = parse_bool(key, val);
    } else if (key == "analyze.dimension") {
      c.analyze_dimension = parse_bool(key, val);
    } else if (key == "render.enabled") {
      c.render_enabled = parse_bool(key, val);
    } else if (key == "out.dir") {
      c.out_dir = val;
    } else if (key == "run.seeds") {
      c.seeds = parse_seed_list(key, val);
    } else if (key == "run.threads") {
      c.threads = static_cast<int>(parse_int(key, val));
    } else if (key == "census.level_step") {
      c.census_level_step = static_cast<int>(parse_int(key, val));
    } else if (key == "census.x_step") {
      c.census_x_step = static_cast<int>(parse_int(key, val));
    } else {
      unknown.push_back(key);
    }
  }

  if (!unknown.empty()) {
    std::string msg = "config: unknown keys:";
    for (const std::string& k : unknown) msg += " " + k;
    throw ParamError(msg);
  }
  if (anchor_level.has_value() != anchor_x.has_value()) {
    throw ParamError(
        "config: busemann.anchor_level and busemann.anchor_x must be set "
        "together");
  }
  if (anchor_level.has_value()) {
    c.anchor = SitePoint{*anchor_level, static_cast<int>(*anchor_x)};
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("config: cannot open " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const RunConfig& c) {
  std::ostringstream out;
  out << "env.kind = "
      << (c.env.kind == EnvKind::Exponential ? "exp" : "semi") << '\n';
  out << "env.seed = " << c.env.seed << '\n';
  out << "env.levels = " << c.env.n_levels << '\n';
  if (c.env.kind == EnvKind::Exponential) {
    out << "env.cols = " << c.env.n_cols << '\n';
    out << "env.rate = " << format_double(c.env.rate) << '\n';
  } else {
    out << "env.mesh = " << format_double(c.env.mesh) << '\n';
    out << "env.x_min = " << format_double(c.env.x_min) << '\n';
    out << "env.x_max = " << format_double(c.env.x_max) << '\n';
  }
  out << "busemann.theta = " << format_double(c.theta) << '\n';
  out << "busemann.delta_sep = " << format_double(c.delta_sep) << '\n';
  if (c.anchor.has_value()) {
    out << "busemann.anchor_level = " << c.anchor->level << '\n';
    out << "busemann.anchor_x = " << c.anchor->x << '\n';
  }
  out << "tol.eq = " << format_double(c.tol_eq) << '\n';
  out << "tol.tie = " << format_double(c.tol_tie) << '\n';
  out << "tol.flat = " << format_double(c.tol_flat) << '\n';
  out << "analyze.islands = " << (c.analyze_islands ? "true" : "false")
      << '\n';
  out << "analyze.interfaces = " << (c.analyze_interfaces ? "true" : "false")
      << '\n';
  out << "analyze.classify = " << (c.analyze_classify ? "true" : "false")
      << '\n';
  out << "analyze.dimension = " << (c.analyze_dimension ? "true" : "false")
      << '\n';
  out << "render.enabled = " << (c.render_enabled ? "true" : "false") << '\n';
  out << "out.dir = " << c.out_dir << '\n';
  if (!c.seeds.empty()) {
    out << "run.seeds = ";
    for (std::size_t i = 0; i < c.seeds.size(); ++i) {
      if (i) out << ",";
      out << c.seeds[i];
    }
    out << '\n';
  }
  out << "run.threads = " << c.threads << '\n';
  out << "census.level_step = " << c.census_level_step << '\n';
  out << "census.x_step = " << c.census_x_step << '\n';
  return out.str();
}

RunConfig preset_config(const std::string& name) {
  RunConfig c;
  if (name == "smoke") {
    c.env.kind = EnvKind::SemiDiscrete;
    c.env.seed = 7;
    c.env.n_levels = 24;
    c.env.mesh = 0.25;
    c.env.x_min = 0.0;
    c.env.x_max = 0.25 * 192 + 0.125;
    c.out_dir = "runs/smoke";
    return c;
  }
  if (name == "acceptance") {
    c.env.kind = EnvKind::SemiDiscrete;
    c.env.seed = 7;
    c.env.n_levels = 60;
    c.env.mesh = 0.25;
    c.env.x_min = 0.0;
    c.env.x_max = 0.25 * 480 + 0.125;
    c.seeds = {7, 11, 23};
    c.analyze_dimension = true;
    c.out_dir = "runs/acceptance";
    return c;
  }
  if (name == "atlas") {
    c.env.kind = EnvKind::SemiDiscrete;
    c.env.seed = 7;
    c.env.n_levels = 96;
    c.env.mesh = 0.125;
    c.env.x_min = 0.0;
    c.env.x_max = 0.125 * 1536 + 0.0625;
    c.analyze_dimension = true;
    c.out_dir = "runs/atlas";
    return c;
  }
  throw ParamError("preset: unknown name '" + name +
                   "' (expected smoke, acceptance, or atlas)");
}

}  // namespace lpp
