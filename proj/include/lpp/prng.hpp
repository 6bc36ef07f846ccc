#pragma once

#include <cmath>
#include <cstdint>

namespace lpp {

// Counter-based generator "sm64ctr-v1".
//
// Draw i of stream (seed, stream_id) is
//
//   mix(mix(mix(seed) ^ (stream_id * C1)) + (i + 1) * C0)
//
// where mix is the SplitMix64 finalizer, C0 = 0x9E3779B97F4A7C15 and
// C1 = 0xD1342543DE82EF95. Every draw is addressed by an explicit counter,
// so any site of a field can be regenerated independently and in parallel.
// Streams keep independent consumers (weights, increments, samplers) out of
// each other's counter space.
//
// The id below is recorded in every output file. Integer draws are
// bit-exact everywhere; floating-point transforms (log, cos) follow the
// platform libm, so reproducibility is promised within one build only.
inline constexpr const char* prng_id = "sm64ctr-v1";

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream_id)
      : base_(mix(mix(seed) ^ (stream_id * 0xD1342543DE82EF95ULL))) {}

  std::uint64_t bits(std::uint64_t counter) const {
    return mix(base_ + (counter + 1) * 0x9E3779B97F4A7C15ULL);
  }

  // Strictly inside (0,1); the 2^-54 offset keeps 0 and 1 unreachable.
  double uniform01(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  // Exp(rate) draw, always finite and strictly positive.
  double exponential(std::uint64_t counter, double rate) const {
    return -std::log(uniform01(counter)) / rate;
  }

  // Standard normal via the Box-Muller transform; draw i consumes the
  // uniform counters 2i and 2i+1 of this stream.
  double gaussian(std::uint64_t counter) const {
    const double u1 = uniform01(2 * counter);
    const double u2 = uniform01(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

 private:
  std::uint64_t base_;
};

// Stream ids used by the library. Tests and ad hoc samplers should use ids
// of 100 and above.
enum : std::uint64_t {
  stream_weights = 0,     // discrete exponential weights
  stream_increments = 1,  // semi-discrete Brownian increments
  stream_sampling = 2,    // random (src, mid) pairs and census points
};

}  // namespace lpp
