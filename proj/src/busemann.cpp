#include "lpp/busemann.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <thread>

#include <json.hpp>

#include "lpp/prng.hpp"

namespace lpp {

namespace {

constexpr double quiet_nan = std::numeric_limits<double>::quiet_NaN();

int map_to_index(const EnvironmentField& env, double model_x) {
  if (env.kind() == EnvKind::Exponential) {
    return static_cast<int>(std::lround(model_x));
  }
  return static_cast<int>(std::lround((model_x - env.x_min()) / env.mesh()));
}

// Snap onto the fixed 2^-33 grid. Snapped values below 2^19 in magnitude
// make every pairwise difference, and every sum of such differences, an
// exact multiple of the grid that IEEE doubles represent and add without
// rounding; the cocycle identity then carries zero defect by construction.
double snap_fixed_point(double g) {
  const double scaled = std::ldexp(g, 33);
  if (!(std::fabs(scaled) < 4503599627370496.0)) {  // 2^52
    throw DomainError(
        "busemann_value: passage value exceeds the fixed-point range");
  }
  return std::ldexp(std::nearbyint(scaled), -33);
}

}  // namespace

double default_delta_sep(const EnvironmentField& env) {
  const double horizon = static_cast<double>(env.n_levels() - 1);
  return 2.0 * std::sqrt(horizon);
}

DifferenceField build_difference_field(const EnvironmentField& env,
                                       int horizon_level, double theta,
                                       double delta_sep,
                                       std::optional<SitePoint> anchor) {
  if (horizon_level != env.n_levels() - 1) {
    throw ParamError("build_difference_field: horizon_level must be the top level");
  }
  if (!(delta_sep > 0.0) || !std::isfinite(delta_sep)) {
    throw ParamError("build_difference_field: delta_sep must be positive");
  }
  if (!std::isfinite(theta)) {
    throw ParamError("build_difference_field: theta must be finite");
  }
  const double center = env.kind() == EnvKind::Exponential
                            ? (env.n_cols() - 1) / 2.0
                            : (env.x_min() + env.x_max()) / 2.0;
  const double ray = center + theta * horizon_level;
  const int idx_minus = map_to_index(env, ray - delta_sep);
  const int idx_plus = map_to_index(env, ray + delta_sep);
  if (idx_minus < 0 || idx_plus >= env.width()) {
    throw ParamError(
        "build_difference_field: target beyond the field edge; reduce theta "
        "or delta_sep, or widen the domain");
  }
  if (idx_minus == idx_plus) {
    throw ParamError(
        "build_difference_field: targets collapse to the same column; "
        "increase delta_sep or mesh resolution");
  }

  SitePoint a;
  if (anchor.has_value()) {
    a = *anchor;
    if (!env.in_bounds(a) || a.x > idx_minus) {
      throw ParamError(
          "build_difference_field: anchor cannot reach both targets");
    }
  } else {
    a = {0, idx_minus / 2};
  }

  DifferenceField df;
  df.theta = theta;
  df.delta_sep = delta_sep;
  df.anchor = a;
  {
    std::thread left([&] {
      df.minus = solve_to_target(env, {horizon_level, idx_minus}, Sign::Minus);
    });
    df.plus = solve_to_target(env, {horizon_level, idx_plus}, Sign::Plus);
    left.join();
  }

  const int width = env.width();
  df.D.assign(static_cast<std::size_t>(env.n_levels()) * width, quiet_nan);
  double defect = -std::numeric_limits<double>::infinity();
  for (int level = 0; level < env.n_levels(); ++level) {
    const double* gm = df.minus.level_data(level);
    const double* gp = df.plus.level_data(level);
    double* row = df.D.data() + static_cast<std::size_t>(level) * width;
    for (int j = 0; j <= idx_minus; ++j) {
      row[j] = gm[j] - gp[j];
      if (j > 0) defect = std::max(defect, row[j] - row[j - 1]);
    }
  }
  df.monotonicity_max_defect = defect;
  df.D0 = df.d(a.level, a.x);
  return df;
}

double busemann_value(const DifferenceField& df, Sign sign, SitePoint v,
                      SitePoint u) {
  const PassageField& pf = sign == Sign::Minus ? df.minus : df.plus;
  if (sign == Sign::Untagged) {
    throw ParamError("busemann_value: sign must be Minus or Plus");
  }
  if (!pf.reachable(v) || !pf.reachable(u)) {
    throw DomainError("busemann_value: site cannot reach the signed target");
  }
  return snap_fixed_point(pf.value(v.level, v.x)) -
         snap_fixed_point(pf.value(u.level, u.x));
}

GrowthReport check_growth(const DifferenceField& df, int level) {
  if (level < 0 || level >= df.n_levels()) {
    throw ParamError("check_growth: level out of range");
  }
  const int cone = df.cone_end();
  const int n_finite = cone + 1;
  if (n_finite < 100) {
    throw DomainError("check_growth: fewer than 100 finite sites on level");
  }
  const int lo = cone / 4;
  const int hi = lo + cone / 2;
  std::vector<double> xs, ym, yp;
  xs.reserve(hi - lo + 1);
  const double* gm = df.minus.level_data(level);
  const double* gp = df.plus.level_data(level);
  for (int j = lo; j <= hi; ++j) {
    xs.push_back(df.env().x_of(j));
    ym.push_back(gm[j]);
    yp.push_back(gp[j]);
  }
  GrowthReport report;
  report.slope_minus = least_squares_slope(xs, ym);
  report.slope_plus = least_squares_slope(xs, yp);
  return report;
}

void export_difference_csv(const DifferenceField& df, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("export_difference_csv: cannot open " + path);
  }
  const EnvironmentField& env = df.env();
  out << "# prng_id=" << prng_id << " seed=" << env.seed()
      << " anchor_level=" << df.anchor.level
      << " anchor_x=" << format_double(env.x_of(df.anchor.x))
      << " theta=" << format_double(df.theta)
      << " delta_sep=" << format_double(df.delta_sep) << "\n";
  out << "level,x,G_minus,G_plus,D\n";
  auto cell = [](double v) {
    return v == neg_inf ? std::string("-inf") : format_double(v);
  };
  for (int level = 0; level < env.n_levels(); ++level) {
    const double* gm = df.minus.level_data(level);
    const double* gp = df.plus.level_data(level);
    for (int j = 0; j <= df.cone_end(); ++j) {
      out << level << ',' << format_double(env.x_of(j)) << ',' << cell(gm[j])
          << ',' << cell(gp[j]) << ',' << format_double(df.d(level, j))
          << '\n';
    }
  }
  if (!out) {
    throw IoError("export_difference_csv: short write to " + path);
  }
}

std::string busemann_summary_json(const DifferenceField& df) {
  nlohmann::json j;
  j["prng_id"] = prng_id;
  j["seed"] = df.env().seed();
  j["D0"] = df.D0;
  j["monotonicity_max_defect"] = df.monotonicity_max_defect;
  const GrowthReport growth = check_growth(df, df.anchor.level);
  j["growth_slopes"] = {{"minus", growth.slope_minus},
                        {"plus", growth.slope_plus}};
  j["anchor"] = {{"level", df.anchor.level},
                 {"x", df.env().x_of(df.anchor.x)}};
  j["theta"] = df.theta;
  j["delta_sep"] = df.delta_sep;
  return j.dump(2);
}

}  // namespace lpp
