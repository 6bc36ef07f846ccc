#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <span>
#include <string>

#include "lpp/errors.hpp"

namespace lpp {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// Relative comparison scale for passage values: sums of n_levels O(1) terms,
// so the tolerance grows with the magnitude being compared.
inline double tol_eq(double reference_value) {
  return 1e-9 * (1.0 + std::fabs(reference_value));
}

inline constexpr double default_tol_tie = 1e-9;

// tol_flat separates float noise from a genuine profile increase; the default
// is one decade above the equality tolerance.
inline double default_tol_flat(double reference_value) {
  return 10.0 * tol_eq(reference_value);
}

// Ordinary least squares y = a + b*x; returns b.
inline double least_squares_slope(std::span<const double> xs,
                                  std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw DomainError("least_squares_slope: need at least two paired samples");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) {
    throw DomainError("least_squares_slope: degenerate abscissae");
  }
  return sxy / sxx;
}

// 17 significant digits round-trip any IEEE-754 double exactly.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace lpp
