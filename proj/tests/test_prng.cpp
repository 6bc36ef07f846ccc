#include "doctest.h"

#include "lpp/prng.hpp"

#include <cmath>
#include <set>
#include <vector>

using lpp::CounterRng;

TEST_SUITE_BEGIN("prng");

TEST_CASE("same seed and stream reproduce bit-identical sequences") {
  CounterRng a(1234, 7);
  CounterRng b(1234, 7);
  for (std::uint64_t c = 0; c < 256; ++c) {
    CHECK(a.bits(c) == b.bits(c));
    CHECK(a.uniform01(c) == b.uniform01(c));
  }
}

TEST_CASE("different seeds and streams decorrelate") {
  CounterRng a(1, 0);
  CounterRng b(2, 0);
  CounterRng c(1, 1);
  int eq_seed = 0;
  int eq_stream = 0;
  for (std::uint64_t i = 0; i < 4096; ++i) {
    if (a.bits(i) == b.bits(i)) ++eq_seed;
    if (a.bits(i) == c.bits(i)) ++eq_stream;
  }
  CHECK(eq_seed == 0);
  CHECK(eq_stream == 0);
}

TEST_CASE("counter access is order independent") {
  CounterRng a(99, 3);
  std::vector<std::uint64_t> forward;
  for (std::uint64_t c = 0; c < 64; ++c) forward.push_back(a.bits(c));
  for (std::uint64_t c = 64; c-- > 0;) CHECK(a.bits(c) == forward[c]);
}

TEST_CASE("uniform draws live strictly inside the unit interval") {
  CounterRng r(5150, 0);
  double lo = 1.0;
  double hi = 0.0;
  for (std::uint64_t c = 0; c < 100000; ++c) {
    double u = r.uniform01(c);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 1e-3);
  CHECK(hi > 1.0 - 1e-3);
}

TEST_CASE("exponential sample mean matches its rate within one percent") {
  CounterRng r(777, 0);
  const int n = 100000;
  const double rate = 2.0;
  double sum = 0.0;
  for (std::uint64_t c = 0; c < n; ++c) sum += r.exponential(c, rate);
  double mean = sum / n;
  CHECK(std::abs(mean - 1.0 / rate) < 0.01 * (1.0 / rate));
}

TEST_CASE("gaussian sample moments are standard normal") {
  CounterRng r(31337, 1);
  const int n = 100000;
  double sum = 0.0;
  double sq = 0.0;
  for (std::uint64_t c = 0; c < n; ++c) {
    double g = r.gaussian(c);
    sum += g;
    sq += g * g;
  }
  double mean = sum / n;
  double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("distinct counters yield distinct 64-bit words") {
  CounterRng r(424242, 0);
  std::set<std::uint64_t> seen;
  for (std::uint64_t c = 0; c < 20000; ++c) seen.insert(r.bits(c));
  CHECK(seen.size() == 20000);
}

TEST_SUITE_END();
