#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lpp/passage.hpp"

namespace lpp {

// Finite-horizon Busemann pair: two passage fields to nearby far targets
// p_minus (left) and p_plus (right) at the top level, plus the difference
// D(v) = G_minus(v) - G_plus(v). W^sigma(v; u) := G^sigma(v) - G^sigma(u)
// is an exact cocycle by construction. Per level D is nonincreasing in the
// spatial coordinate, so the profile f(x) = D0 - D(x) relative to the anchor
// is nondecreasing; its points of increase are the instability sites.
//
// Both fields are finite exactly on the cone x <= target_minus index, which
// is therefore the usable window at every level.
struct DifferenceField {
  PassageField minus;
  PassageField plus;
  SitePoint anchor;
  double D0 = 0.0;
  double theta = 0.0;
  double delta_sep = 0.0;
  // max over levels and sites of D(x+1) - D(x); nonpositive when exactly
  // monotone, bounded by tol_eq when healthy
  double monotonicity_max_defect = 0.0;
  std::vector<double> D;  // level-major; NaN outside the common cone

  const EnvironmentField& env() const { return *minus.env; }
  int n_levels() const { return env().n_levels(); }
  int width() const { return env().width(); }
  // Largest spatial index with finite D, identical on every level.
  int cone_end() const { return minus.target.x; }

  double d(int level, int x) const {
    return D[static_cast<std::size_t>(level) * width() + x];
  }
  // Nondecreasing profile at one level; f(anchor) = 0 at the anchor level.
  double f(int level, int x) const { return D0 - d(level, x); }
};

struct GrowthReport {
  double slope_minus = 0.0;
  double slope_plus = 0.0;
};

// Transversal target separation used when none is configured:
// 2*sqrt(horizon) in model units.
double default_delta_sep(const EnvironmentField& env);

// Places targets at model coordinates center + theta*T +/- delta_sep
// (T = horizon_level, center = spatial midpoint of the domain), maps them to
// the nearest distinct columns, and solves both passage fields (the two
// solves run concurrently). The anchor defaults to the midpoint of the
// level-0 segment that can reach both targets. Throws ParamError when the
// horizon is not the top level, a target leaves the domain or both map to
// one column, or the anchor cannot reach both targets.
DifferenceField build_difference_field(const EnvironmentField& env,
                                       int horizon_level, double theta,
                                       double delta_sep,
                                       std::optional<SitePoint> anchor);

// G^sigma(v) - G^sigma(u), with both passage values snapped onto a fixed
// 2^-33 grid first. On that grid every difference and every sum of
// differences is exact in IEEE arithmetic, so antisymmetry and the cocycle
// identity hold with zero defect, not just within tolerance; the snap
// perturbs each value by at most 6e-11, well under tol_eq. Throws
// DomainError when either site cannot reach target sigma or a passage value
// exceeds the 2^19 fixed-point range.
double busemann_value(const DifferenceField& df, Sign sign, SitePoint v,
                      SitePoint u);

// Least-squares slope of x -> G^sigma(x, level) over the central half of the
// level's usable window, per sign. Throws DomainError when fewer than 100
// finite sites exist.
GrowthReport check_growth(const DifferenceField& df, int level);

// CSV columns: level, x, G_minus, G_plus, D.
void export_difference_csv(const DifferenceField& df, const std::string& path);

// {D0, growth slopes at the anchor level, monotonicity max-defect} plus
// reproducibility metadata.
std::string busemann_summary_json(const DifferenceField& df);

}  // namespace lpp
