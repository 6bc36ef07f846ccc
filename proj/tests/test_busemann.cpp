#include "doctest.h"

#include "lpp/busemann.hpp"
#include "lpp/environment.hpp"
#include "lpp/errors.hpp"
#include "lpp/instability.hpp"

#include <cmath>
#include <fstream>
#include <vector>

using namespace lpp;

namespace {

EnvironmentField semi_env(std::uint64_t seed, int levels, int width,
                          double mesh = 0.25) {
  EnvParams p;
  p.kind = EnvKind::SemiDiscrete;
  p.seed = seed;
  p.n_levels = levels;
  p.mesh = mesh;
  p.x_min = 0.0;
  p.x_max = mesh * (width - 1) + mesh * 0.5;
  return gen_environment(p);
}

EnvironmentField disc_env(std::uint64_t seed, int levels, int cols) {
  EnvParams p;
  p.kind = EnvKind::Exponential;
  p.seed = seed;
  p.n_levels = levels;
  p.n_cols = cols;
  p.rate = 1.0;
  return gen_environment(p);
}

DifferenceField default_field(const EnvironmentField& env) {
  return build_difference_field(env, env.n_levels() - 1, 0.0,
                                default_delta_sep(env), std::nullopt);
}

// 1-level all-zero semi environment: the cheapest legal carrier for
// hand-filled passage rows.
EnvironmentField zeros_env(int width, double mesh) {
  EnvParams p;
  p.kind = EnvKind::SemiDiscrete;
  p.seed = 7;
  p.n_levels = 1;
  p.mesh = mesh;
  p.x_min = 0.0;
  p.x_max = mesh * (width - 1) + mesh * 0.5;
  return make_environment(p, std::vector<double>(width, 0.0));
}

// Synthetic field whose rows are affine in the model coordinate; env must
// outlive the result.
DifferenceField affine_df(const EnvironmentField& env, double slope,
                          double plus_offset) {
  const int width = env.width();
  DifferenceField df;
  std::vector<double> row(width);
  for (int j = 0; j < width; ++j) {
    row[j] = slope * env.x_of(j);
  }
  df.minus.env = &env;
  df.minus.target = {0, width - 1};
  df.minus.sign_tag = Sign::Minus;
  df.minus.values = row;
  for (double& v : row) v += plus_offset;
  df.plus.env = &env;
  df.plus.target = {0, width - 1};
  df.plus.sign_tag = Sign::Plus;
  df.plus.values = std::move(row);
  df.anchor = {0, 0};
  return df;
}

}  // namespace

TEST_SUITE_BEGIN("busemann");

TEST_CASE("build rejects bad horizons, separations, and anchors") {
  const EnvironmentField env = semi_env(11, 12, 161);
  const double delta = default_delta_sep(env);
  CHECK_THROWS_AS(build_difference_field(env, 5, 0.0, delta, std::nullopt),
                  ParamError);
  CHECK_THROWS_AS(build_difference_field(env, 11, 0.0, 0.0, std::nullopt),
                  ParamError);
  CHECK_THROWS_AS(build_difference_field(env, 11, 0.0, 1e6, std::nullopt),
                  ParamError);
  // below half a mesh cell the two targets land on one column
  CHECK_THROWS_AS(build_difference_field(env, 11, 0.0, 0.05, std::nullopt),
                  ParamError);
  CHECK_THROWS_AS(
      build_difference_field(env, 11, 1e9, delta, std::nullopt), ParamError);
  const DifferenceField df = default_field(env);
  CHECK_THROWS_AS(build_difference_field(env, 11, 0.0, delta,
                                         SitePoint{0, df.cone_end() + 1}),
                  ParamError);
  CHECK_THROWS_AS(build_difference_field(env, 11, 0.0, delta,
                                         SitePoint{-1, 0}),
                  ParamError);
}

TEST_CASE("one-level field: constant difference, no points of increase") {
  const EnvironmentField env = semi_env(3, 1, 64);
  const DifferenceField df = build_difference_field(env, 0, 0.0, 2.0,
                                                    std::nullopt);
  const int cone = df.cone_end();
  REQUIRE(cone >= 2);
  for (int x = 0; x <= cone; ++x) {
    CHECK(std::fabs(df.d(0, x) - df.D0) <= tol_eq(df.D0));
  }
  const LevelProfile prof = make_level_profile(df, 0);
  CHECK(points_of_increase(prof, default_tol_flat(df.D0)).empty());
}

TEST_CASE("difference field is monotone per level with tiny defect") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const EnvironmentField env = semi_env(seed, 40, 321);
    const DifferenceField df = default_field(env);
    CHECK(df.monotonicity_max_defect <= 1e-9);
    // f is the reflected profile, so it must be nondecreasing as well
    const int cone = df.cone_end();
    for (int level = 0; level < env.n_levels(); ++level) {
      for (int x = 0; x + 1 <= cone; ++x) {
        CHECK(df.f(level, x + 1) - df.f(level, x) >= -1e-9);
      }
    }
  }
  const EnvironmentField denv = disc_env(5, 30, 201);
  const DifferenceField ddf = default_field(denv);
  CHECK(ddf.monotonicity_max_defect <= 1e-9);
}

TEST_CASE("busemann values: antisymmetry and cocycle hold with zero defect") {
  const EnvironmentField env = semi_env(17, 36, 241);
  const DifferenceField df = default_field(env);
  const int cone = df.cone_end();
  REQUIRE(cone >= 8);
  const std::vector<SitePoint> sites = {
      {0, 0},          {0, cone / 3}, {0, cone},     {7, 1},
      {7, cone / 2},   {18, cone / 4}, {18, cone},   {30, 2},
      {35, cone / 2},  {35, cone},
  };
  for (Sign sign : {Sign::Minus, Sign::Plus}) {
    for (const SitePoint& v : sites) {
      CHECK(busemann_value(df, sign, v, v) == 0.0);
      for (const SitePoint& u : sites) {
        const double w_vu = busemann_value(df, sign, v, u);
        CHECK(w_vu == -busemann_value(df, sign, u, v));
        for (const SitePoint& w : sites) {
          const double lhs = w_vu + busemann_value(df, sign, u, w);
          CHECK(lhs == busemann_value(df, sign, v, w));
        }
      }
    }
  }
  CHECK_THROWS_AS(busemann_value(df, Sign::Untagged, sites[0], sites[1]),
                  ParamError);
  CHECK_THROWS_AS(
      busemann_value(df, Sign::Minus, SitePoint{0, cone + 1}, sites[0]),
      DomainError);
}

TEST_CASE("cocycle exactness also holds on the discrete backend") {
  const EnvironmentField env = disc_env(23, 24, 161);
  const DifferenceField df = default_field(env);
  const int cone = df.cone_end();
  const std::vector<SitePoint> sites = {
      {0, 0}, {0, cone}, {5, cone / 2}, {12, cone / 3}, {23, cone}};
  for (Sign sign : {Sign::Minus, Sign::Plus}) {
    for (const SitePoint& v : sites) {
      for (const SitePoint& u : sites) {
        for (const SitePoint& w : sites) {
          CHECK(busemann_value(df, sign, v, u) +
                    busemann_value(df, sign, u, w) ==
                busemann_value(df, sign, v, w));
        }
      }
    }
  }
}

TEST_CASE("passage values exceeding the fixed-point range are rejected") {
  const EnvironmentField env = zeros_env(128, 0.5);
  DifferenceField df = affine_df(env, 1.0, 0.0);
  df.minus.values[1] = 1.0e7;  // beyond 2^19
  CHECK_THROWS_AS(
      busemann_value(df, Sign::Minus, SitePoint{0, 1}, SitePoint{0, 0}),
      DomainError);
}

TEST_CASE("busemann difference equals passage along extracted geodesics") {
  const EnvironmentField env = semi_env(29, 32, 281);
  const DifferenceField df = default_field(env);
  for (Sign sign : {Sign::Minus, Sign::Plus}) {
    const PassageField& pf = sign == Sign::Minus ? df.minus : df.plus;
    const SitePoint u{0, df.cone_end() / 3};
    const Geodesic g =
        extract_geodesic(pf, u, Side::Leftmost, default_tol_tie);
    const ForwardField ff = solve_from_source(env, u, env.n_levels() - 1);
    for (const Geodesic::LevelRun& run : g.runs) {
      for (int x : {run.x_in, run.x_out}) {
        const SitePoint v{run.level, x};
        const double l_uv = ff.value(v.level, v.x);
        const double w_uv = busemann_value(df, sign, u, v);
        CHECK(std::fabs(l_uv - w_uv) <= tol_eq(l_uv));
      }
    }
  }
}

TEST_CASE("leftmost geodesic maximizes the busemann update at every level") {
  const EnvironmentField env = semi_env(31, 24, 201);
  const DifferenceField df = default_field(env);
  const SitePoint v{0, df.cone_end() / 4};
  const Geodesic g =
      extract_geodesic(df.minus, v, Side::Leftmost, default_tol_tie);
  const ForwardField ff = solve_from_source(env, v, env.n_levels() - 1);
  const double total = df.minus.value(v.level, v.x);
  for (int mid : {5, 11, 19}) {
    double best = neg_inf;
    for (int z = v.x; z <= df.cone_end(); ++z) {
      best = std::max(best, ff.value(mid, z) +
                                busemann_value(df, Sign::Minus,
                                               SitePoint{mid, z}, df.anchor));
    }
    const int zg = g.run_at(mid).x_in;
    const double at_geo =
        ff.value(mid, zg) +
        busemann_value(df, Sign::Minus, SitePoint{mid, zg}, df.anchor);
    CHECK(std::fabs(best - at_geo) <= tol_eq(total));
  }
}

TEST_CASE("growth slope is exact on affine input and shift-invariant") {
  const double theta = 0.35;
  const EnvironmentField env = zeros_env(256, 0.5);
  const DifferenceField df = affine_df(env, 2.0 * theta, 3.0);
  const GrowthReport rep = check_growth(df, 0);
  CHECK(rep.slope_minus == doctest::Approx(2.0 * theta).epsilon(1e-12));
  // the plus rows differ by a constant only, so the slope is identical
  CHECK(rep.slope_plus == doctest::Approx(rep.slope_minus).epsilon(1e-12));
}

TEST_CASE("growth requires at least 100 usable sites") {
  const EnvironmentField env = semi_env(37, 6, 64);
  const DifferenceField df = build_difference_field(env, 5, 0.0, 2.0,
                                                    std::nullopt);
  CHECK_THROWS_AS(check_growth(df, 0), DomainError);
  CHECK_THROWS_AS(check_growth(df, -1), ParamError);
}

TEST_CASE("signed growth slopes agree on a long run") {
  // distance to target over the regression window must dwarf the target
  // separation for the two slopes to align
  const EnvironmentField env = semi_env(41, 200, 5601, 1.0);
  const DifferenceField df = default_field(env);
  const GrowthReport rep = check_growth(df, 0);
  CHECK(rep.slope_minus <= rep.slope_plus + 1e-9);
  const double scale = std::max(std::fabs(rep.slope_minus),
                                std::fabs(rep.slope_plus));
  CHECK(std::fabs(rep.slope_minus - rep.slope_plus) <= 0.05 * scale);
}

TEST_CASE("points of increase are anchor-independent") {
  const EnvironmentField env = semi_env(43, 30, 241);
  const DifferenceField a = default_field(env);
  const DifferenceField b = build_difference_field(
      env, env.n_levels() - 1, 0.0, default_delta_sep(env), SitePoint{0, 3});
  CHECK(a.anchor.x != b.anchor.x);
  for (int level : {0, 10, 20}) {
    const double tol = default_tol_flat(a.D0);
    CHECK(points_of_increase(make_level_profile(a, level), tol) ==
          points_of_increase(make_level_profile(b, level), tol));
  }
}

TEST_CASE("difference profile reaches both signs on a wide window") {
  bool found = false;
  for (std::uint64_t seed = 1; seed <= 10 && !found; ++seed) {
    const EnvironmentField env = semi_env(seed, 30, 401);
    const DifferenceField df = default_field(env);
    const double tol = default_tol_flat(df.D0);
    const int cone = df.cone_end();
    const int level = df.anchor.level;
    if (df.f(level, 0) < -tol && df.f(level, cone) > tol) found = true;
  }
  CHECK(found);
}

TEST_CASE("csv export and json summary carry the reproducibility header") {
  const EnvironmentField env = semi_env(47, 20, 501);
  const DifferenceField df = default_field(env);
  const std::string path = "/tmp/lpp_busemann_test.csv";
  export_difference_csv(df, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# prng_id=", 0) == 0);
  std::getline(in, line);
  CHECK(line == "level,x,G_minus,G_plus,D");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == env.n_levels() * (df.cone_end() + 1));

  const std::string summary = busemann_summary_json(df);
  for (const char* key : {"D0", "growth_slopes", "monotonicity_max_defect",
                          "prng_id", "anchor"}) {
    CHECK(summary.find(key) != std::string::npos);
  }
}

TEST_SUITE_END();
