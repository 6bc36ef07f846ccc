#include "doctest.h"

#include "lpp/environment.hpp"
#include "lpp/errors.hpp"
#include "lpp/prng.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace lpp;

namespace {

EnvParams exp_params(std::uint64_t seed, int levels, int cols, double rate = 1.0) {
  EnvParams p;
  p.kind = EnvKind::Exponential;
  p.seed = seed;
  p.n_levels = levels;
  p.n_cols = cols;
  p.rate = rate;
  return p;
}

EnvParams semi_params(std::uint64_t seed, int levels, double mesh, double x_min, double x_max) {
  EnvParams p;
  p.kind = EnvKind::SemiDiscrete;
  p.seed = seed;
  p.n_levels = levels;
  p.mesh = mesh;
  p.x_min = x_min;
  p.x_max = x_max;
  return p;
}

std::filesystem::path temp_file(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / "lpp_env_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE_BEGIN("environment");

TEST_CASE("parameter validation rejects bad shapes") {
  CHECK_THROWS_AS((void)gen_environment(exp_params(1, 0, 3)), ParamError);
  CHECK_THROWS_AS((void)gen_environment(exp_params(1, 3, 0)), ParamError);
  CHECK_THROWS_AS((void)gen_environment(exp_params(1, 3, 3, -1.0)), ParamError);
  CHECK_THROWS_AS((void)gen_environment(exp_params(1, 3, 3, 0.0)), ParamError);
  CHECK_THROWS_AS((void)gen_environment(semi_params(1, 2, 0.0, 0.0, 1.0)), ParamError);
  CHECK_THROWS_AS((void)gen_environment(semi_params(1, 2, 0.1, 1.0, 1.0)), ParamError);
  CHECK_THROWS_AS((void)gen_environment(semi_params(1, 0, 0.1, 0.0, 1.0)), ParamError);
}

TEST_CASE("generation is deterministic in the seed") {
  auto a = gen_environment(exp_params(42, 4, 5, 2.0));
  auto b = gen_environment(exp_params(42, 4, 5, 2.0));
  auto c = gen_environment(exp_params(43, 4, 5, 2.0));
  CHECK(a.raw_values() == b.raw_values());
  CHECK(a.raw_values() != c.raw_values());
}

TEST_CASE("exponential weights are positive with the right mean") {
  auto env = gen_environment(exp_params(7, 100, 1000, 2.0));
  double sum = 0.0;
  for (int l = 0; l < env.n_levels(); ++l)
    for (int c = 0; c < env.n_cols(); ++c) {
      double w = env.weight(l, c);
      CHECK(w > 0.0);
      sum += w;
    }
  double mean = sum / (100.0 * 1000.0);
  CHECK(std::abs(mean - 0.5) < 0.01 * 0.5);
}

TEST_CASE("semi-discrete paths start at zero and have calibrated increments") {
  auto env = gen_environment(semi_params(11, 10, 0.25, 0.0, 2500.0));
  REQUIRE(env.width() == 10001);
  double sq = 0.0;
  double sum = 0.0;
  std::int64_t n = 0;
  for (int l = 0; l < env.n_levels(); ++l) {
    auto row = env.level_data(l);
    CHECK(row[0] == 0.0);
    for (int j = 1; j < env.width(); ++j) {
      double d = row[j] - row[j - 1];
      sum += d;
      sq += d * d;
      ++n;
    }
  }
  double mean = sum / double(n);
  double var = sq / double(n) - mean * mean;
  CHECK(std::abs(var - 0.25) < 0.02 * 0.25);
  CHECK(std::abs(mean) < 3.0 * std::sqrt(0.25 / double(n)));
}

TEST_CASE("model coordinates map onto the mesh") {
  auto env = gen_environment(semi_params(3, 2, 0.5, -1.0, 1.5));
  REQUIRE(env.width() == 6);
  CHECK(env.x_of(0) == doctest::Approx(-1.0));
  CHECK(env.x_of(5) == doctest::Approx(1.5));
  CHECK(env.x_of(2) == doctest::Approx(0.0));
}

TEST_CASE("save and load round-trip bit-exactly") {
  auto path = temp_file("roundtrip.llenv");
  for (auto params : {exp_params(99, 6, 4, 3.0), semi_params(99, 3, 0.125, -2.0, 2.0)}) {
    auto env = gen_environment(params);
    save_environment(env, path.string());
    auto back = load_environment(path.string());
    CHECK(back.kind() == env.kind());
    CHECK(back.seed() == env.seed());
    CHECK(back.n_levels() == env.n_levels());
    CHECK(back.width() == env.width());
    CHECK(back.raw_values() == env.raw_values());
  }
  std::filesystem::remove(path);
}

TEST_CASE("loader rejects tampered files") {
  auto path = temp_file("tampered.llenv");
  auto env = gen_environment(exp_params(5, 2, 2, 1.0));
  save_environment(env, path.string());

  SUBCASE("bad magic") {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("XX", 2);
    f.close();
    CHECK_THROWS_AS((void)load_environment(path.string()), IoError);
  }
  SUBCASE("truncated payload") {
    auto size = std::filesystem::file_size(path);
    std::filesystem::resize_file(path, size - 8);
    CHECK_THROWS_AS((void)load_environment(path.string()), IoError);
  }
  SUBCASE("trailing garbage") {
    std::ofstream f(path, std::ios::app | std::ios::binary);
    f.write("zzzz", 4);
    f.close();
    CHECK_THROWS_AS((void)load_environment(path.string()), IoError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS((void)load_environment((path.string() + ".nope")), IoError);
  }
  std::filesystem::remove(path);
}

TEST_CASE("frozen reference fields guard the generator") {
  // Values pinned from the first release of the generator; any change to the
  // counter layout or the variate transforms must show up here.
  auto env = gen_environment(exp_params(42, 3, 3, 2.0));
  const double expected[9] = {
      0.040975433313842673, 1.2437569765947076,   0.25251241237532918,
      0.34843956343144689,  0.85890967351607928,  1.3966652788628942,
      0.57198028289554625,  0.086840172372936508, 0.44991246368048665};
  for (int l = 0; l < 3; ++l)
    for (int c = 0; c < 3; ++c) CHECK(env.weight(l, c) == expected[3 * l + c]);

  double mean = 0.0;
  for (double w : expected) mean += w / 9.0;
  CHECK(std::abs(mean - 0.5) <= 3.0 * 0.5 / 3.0);

  auto semi = gen_environment(semi_params(42, 2, 0.5, 0.0, 1.6));
  REQUIRE(semi.width() == 4);
  const double expected_semi[8] = {
      0.0, -0.19570266762044594, -0.18453559174741949, 0.48016455374224332,
      0.0, 1.5062516042305298,   1.2482996590743074,   1.7006466354848815};
  for (int l = 0; l < 2; ++l)
    for (int j = 0; j < 4; ++j) CHECK(semi.path(l, j) == expected_semi[4 * l + j]);
}

TEST_CASE("header json carries identifying fields") {
  auto env = gen_environment(exp_params(21, 2, 3, 1.5));
  auto header = environment_header_json(env);
  CHECK(header.find("\"exponential\"") != std::string::npos);
  CHECK(header.find(prng_id) != std::string::npos);
  CHECK(header.find("\"seed\"") != std::string::npos);
}

TEST_SUITE_END();
