#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpp/errors.hpp"

namespace lpp {

enum class EnvKind { Exponential, SemiDiscrete };

// Space-time site. level is the time index in [0, n_levels); x is a column
// for the discrete backend and a mesh index for the semi-discrete one.
struct SitePoint {
  int level = 0;
  int x = 0;

  friend bool operator==(const SitePoint&, const SitePoint&) = default;
};

struct EnvParams {
  EnvKind kind = EnvKind::Exponential;
  std::uint64_t seed = 0;
  int n_levels = 0;
  // Exponential backend
  int n_cols = 0;
  double rate = 1.0;
  // SemiDiscrete backend
  double mesh = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
};

// Immutable random environment for the two LPP backends.
//
// Exponential: n_levels x n_cols grid of independent Exp(rate) weights.
// SemiDiscrete: per level a random path B_k sampled at mesh points
// x_j = x_min + j*mesh with B_k(x_min) = 0 and independent Gaussian
// increments of variance mesh. Storage is dense row-major; after
// construction the field is read-only and safe to share across threads.
class EnvironmentField {
 public:
  const EnvParams& params() const { return params_; }
  EnvKind kind() const { return params_.kind; }
  std::uint64_t seed() const { return params_.seed; }
  int n_levels() const { return params_.n_levels; }
  int n_cols() const { return params_.n_cols; }
  double rate() const { return params_.rate; }
  double mesh() const { return params_.mesh; }
  double x_min() const { return params_.x_min; }
  double x_max() const { return params_.x_max; }

  // Sites per level: n_cols for Exponential, mesh points for SemiDiscrete.
  int width() const { return width_; }

  // Exp weight at a discrete site.
  double weight(int level, int col) const {
    return values_[static_cast<std::size_t>(level) * width_ + col];
  }

  // B_level at mesh index j.
  double path(int level, int j) const {
    return values_[static_cast<std::size_t>(level) * width_ + j];
  }

  const double* level_data(int level) const {
    return values_.data() + static_cast<std::size_t>(level) * width_;
  }

  // Model coordinate of spatial index j.
  double x_of(int j) const {
    return params_.kind == EnvKind::SemiDiscrete
               ? params_.x_min + j * params_.mesh
               : static_cast<double>(j);
  }

  bool in_bounds(SitePoint p) const {
    return p.level >= 0 && p.level < params_.n_levels && p.x >= 0 &&
           p.x < width_;
  }

  const std::vector<double>& raw_values() const { return values_; }

  friend EnvironmentField gen_environment(const EnvParams& params);
  friend EnvironmentField make_environment(const EnvParams& params,
                                           std::vector<double> values);
  friend EnvironmentField load_environment(const std::string& path);

 private:
  EnvironmentField() = default;

  EnvParams params_;
  int width_ = 0;
  std::vector<double> values_;
};

// Deterministic in (params, seed): the same call yields bit-identical fields
// within one build. Throws ParamError on non-positive dimensions, rate, or
// mesh, or on x_min >= x_max.
EnvironmentField gen_environment(const EnvParams& params);

// Wraps externally supplied values (row-major, level-major) in a field.
// Exponential values must be positive; semi-discrete rows must start at 0.
// Throws ParamError on size or value violations.
EnvironmentField make_environment(const EnvParams& params,
                                  std::vector<double> values);

// Single-file persistence: a one-line JSON header (the contract) followed by
// the raw value blob. Layout documented in environment.cpp.
void save_environment(const EnvironmentField& env, const std::string& path);
EnvironmentField load_environment(const std::string& path);

// Header JSON exactly as persisted, for embedding in reports.
std::string environment_header_json(const EnvironmentField& env);

}  // namespace lpp
