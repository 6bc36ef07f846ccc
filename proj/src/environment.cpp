#include "lpp/environment.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "lpp/prng.hpp"

// Persistence layout (format_version 1):
//
//   line 1: ASCII "LLENV 1\n"
//   line 2: compact JSON header {format_version, kind, seed, prng_id, params}
//           terminated by '\n'
//   rest:   width*n_levels IEEE-754 doubles, little-endian, row-major
//           (level-major, spatial index fastest)
//
// The header is the contract; the blob is exactly the field's value array.
// Only little-endian hosts are supported by this format.

static_assert(std::endian::native == std::endian::little,
              "environment blob format assumes a little-endian host");

namespace lpp {

namespace {

void validate(const EnvParams& p) {
  if (p.n_levels <= 0) {
    throw ParamError("gen_environment: n_levels must be positive");
  }
  if (p.kind == EnvKind::Exponential) {
    if (p.n_cols <= 0) {
      throw ParamError("gen_environment: n_cols must be positive");
    }
    if (!(p.rate > 0.0) || !std::isfinite(p.rate)) {
      throw ParamError("gen_environment: rate must be positive and finite");
    }
  } else {
    if (!(p.mesh > 0.0) || !std::isfinite(p.mesh)) {
      throw ParamError("gen_environment: mesh must be positive and finite");
    }
    if (!(p.x_min < p.x_max) || !std::isfinite(p.x_min) ||
        !std::isfinite(p.x_max)) {
      throw ParamError("gen_environment: x_min must be less than x_max");
    }
  }
}

int mesh_points(const EnvParams& p) {
  return static_cast<int>(std::floor((p.x_max - p.x_min) / p.mesh)) + 1;
}

}  // namespace

EnvironmentField gen_environment(const EnvParams& params) {
  validate(params);
  EnvironmentField env;
  env.params_ = params;
  if (params.kind == EnvKind::Exponential) {
    env.width_ = params.n_cols;
    const std::size_t n =
        static_cast<std::size_t>(params.n_levels) * params.n_cols;
    env.values_.resize(n);
    CounterRng rng(params.seed, stream_weights);
    for (std::size_t i = 0; i < n; ++i) {
      env.values_[i] = rng.exponential(i, params.rate);
    }
  } else {
    const int m = mesh_points(params);
    env.width_ = m;
    env.values_.resize(static_cast<std::size_t>(params.n_levels) * m);
    CounterRng rng(params.seed, stream_increments);
    const double sd = std::sqrt(params.mesh);
    for (int level = 0; level < params.n_levels; ++level) {
      double* row = env.values_.data() + static_cast<std::size_t>(level) * m;
      row[0] = 0.0;  // paths are anchored at x_min on every level
      for (int j = 1; j < m; ++j) {
        const std::uint64_t ctr =
            static_cast<std::uint64_t>(level) * (m - 1) + (j - 1);
        row[j] = row[j - 1] + sd * rng.gaussian(ctr);
      }
    }
  }
  return env;
}

EnvironmentField make_environment(const EnvParams& params,
                                  std::vector<double> values) {
  validate(params);
  const int width =
      params.kind == EnvKind::Exponential ? params.n_cols : mesh_points(params);
  const std::size_t expect =
      static_cast<std::size_t>(params.n_levels) * width;
  if (values.size() != expect) {
    throw ParamError("make_environment: expected " + std::to_string(expect) +
                     " values, got " + std::to_string(values.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ParamError("make_environment: non-finite value at index " +
                       std::to_string(i));
    }
    if (params.kind == EnvKind::Exponential && !(values[i] > 0.0)) {
      throw ParamError("make_environment: weights must be positive");
    }
  }
  if (params.kind == EnvKind::SemiDiscrete) {
    for (int level = 0; level < params.n_levels; ++level) {
      if (values[static_cast<std::size_t>(level) * width] != 0.0) {
        throw ParamError(
            "make_environment: each path must start at 0 at x_min");
      }
    }
  }
  EnvironmentField env;
  env.params_ = params;
  env.width_ = width;
  env.values_ = std::move(values);
  return env;
}

std::string environment_header_json(const EnvironmentField& env) {
  const EnvParams& p = env.params();
  nlohmann::json params;
  params["n_levels"] = p.n_levels;
  if (p.kind == EnvKind::Exponential) {
    params["n_cols"] = p.n_cols;
    params["rate"] = p.rate;
  } else {
    params["mesh"] = p.mesh;
    params["x_min"] = p.x_min;
    params["x_max"] = p.x_max;
  }
  nlohmann::json header;
  header["format_version"] = 1;
  header["kind"] =
      p.kind == EnvKind::Exponential ? "exponential" : "semi_discrete";
  header["seed"] = p.seed;
  header["prng_id"] = prng_id;
  header["params"] = params;
  return header.dump();
}

void save_environment(const EnvironmentField& env, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("save_environment: cannot open " + path);
  }
  out << "LLENV 1\n" << environment_header_json(env) << '\n';
  const auto& values = env.raw_values();
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!out) {
    throw IoError("save_environment: short write to " + path);
  }
}

EnvironmentField load_environment(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("load_environment: cannot open " + path);
  }
  std::string magic, header_line;
  if (!std::getline(in, magic) || magic != "LLENV 1" ||
      !std::getline(in, header_line)) {
    throw IoError("load_environment: bad magic or missing header in " + path);
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_line);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("load_environment: malformed header: ") +
                  e.what());
  }
  if (header.value("format_version", -1) != 1) {
    throw IoError("load_environment: unsupported format_version");
  }
  if (header.value("prng_id", "") != prng_id) {
    throw IoError("load_environment: blob was generated by prng '" +
                  header.value("prng_id", std::string("?")) +
                  "', this build uses '" + prng_id + "'");
  }

  EnvParams p;
  const std::string kind = header.value("kind", "");
  const nlohmann::json& jp = header.at("params");
  p.seed = header.at("seed").get<std::uint64_t>();
  p.n_levels = jp.at("n_levels").get<int>();
  if (kind == "exponential") {
    p.kind = EnvKind::Exponential;
    p.n_cols = jp.at("n_cols").get<int>();
    p.rate = jp.at("rate").get<double>();
  } else if (kind == "semi_discrete") {
    p.kind = EnvKind::SemiDiscrete;
    p.mesh = jp.at("mesh").get<double>();
    p.x_min = jp.at("x_min").get<double>();
    p.x_max = jp.at("x_max").get<double>();
  } else {
    throw IoError("load_environment: unknown kind '" + kind + "'");
  }
  validate(p);

  EnvironmentField env;
  env.params_ = p;
  env.width_ = p.kind == EnvKind::Exponential ? p.n_cols : mesh_points(p);
  const std::size_t n =
      static_cast<std::size_t>(p.n_levels) * env.width_;
  env.values_.resize(n);
  in.read(reinterpret_cast<char*>(env.values_.data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != n * sizeof(double)) {
    throw IoError("load_environment: blob shorter than header promises");
  }
  char extra;
  if (in.read(&extra, 1)) {
    throw IoError("load_environment: trailing bytes after blob");
  }
  return env;
}

}  // namespace lpp
