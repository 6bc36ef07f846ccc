#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lpp/instability.hpp"

namespace lpp {

// Passage to a payoff row: H(v) = max over monotone paths from v to a site
// (top_level, y) of path weight plus payoff[y]. A -inf payoff entry excludes
// that column as a terminal. Rows cover levels 0..top_level. Semi-discrete
// environments only.
struct BoundaryField {
  const EnvironmentField* env = nullptr;
  int top_level = 0;
  std::vector<double> values;  // level-major, width() entries per level

  double value(int level, int x) const {
    return values[static_cast<std::size_t>(level) * env->width() + x];
  }
};

BoundaryField solve_to_boundary(const EnvironmentField& env, int top_level,
                                std::span<const double> payoff);

// Competition function for one sign at a reference point (t, a): per site
// (r, x) with r < t,
//
//   d(x, r) = H_R(x, r) - H_L(x, r),
//
// where both terms are passages to level t weighted by the sign's relative
// passage value there, H_L restricted to arrival columns y <= a and H_R to
// y >= a. Within a row d is finite and nondecreasing for x <= a, +inf for
// a < x <= cone_end (no left arrival exists), and NaN past the sign's cone.
struct CompetitionField {
  const EnvironmentField* env = nullptr;
  SitePoint reference;
  Sign sign = Sign::Untagged;
  int cone_end = 0;
  std::vector<double> boundary;        // payoff row at the reference level
  std::vector<std::vector<double>> d;  // rows 0..reference.level-1
  // max over rows of a neighbor decrease d(x) - d(x+1); ~tol_eq when healthy
  double monotonicity_max_defect = 0.0;
  // |d| at or below this is a tie: the two restricted passages are float
  // sums, so an exact tie surfaces as noise at the payoff scale
  double zero_tol = 0.0;

  int n_rows() const { return static_cast<int>(d.size()); }
};

// Throws CapabilityError on discrete environments, ParamError when df was
// not built on env, the sign is Untagged, the reference level is not in
// [1, top], or the reference cannot reach the sign's target.
CompetitionField competition_field(const EnvironmentField& env,
                                   const DifferenceField& df,
                                   SitePoint reference, Sign sign);

// One traced interface. points[r] is the crossing cell of row r, or -1
// where that side never leaves its sign band on the row.
struct ShockInterface {
  Sign sign = Sign::Untagged;
  Side side = Side::Leftmost;
  SitePoint start;
  std::vector<int> points;  // indexed by level, rows 0..start.level-1
  int max_jump = 0;         // max |dx| between consecutive defined rows
};

// Left interface: first x with d >= -zero_tol per row (the +inf zone
// qualifies). Right interface: last x with d <= zero_tol. A row whose
// crossing falls between cells yields left = right + 1; ties yield
// left <= right with the tie plateau in between. Validates row monotonicity
// of d and throws DomainError on a decrease beyond tolerance.
std::pair<ShockInterface, ShockInterface> shock_interfaces_from_point(
    const CompetitionField& cf);

struct ShockAge {
  int levels = 0;         // re-meet level minus the site's level
  bool censored = false;  // the pair only re-met at the top level
};

// A shock at v for the field's sign: the leftmost and rightmost geodesics
// from v leave v through distinct columns. The age counts levels until they
// re-meet; both end at the field's target, so they always do, and a re-meet
// only at the top level is censored. Returns nullopt at stable sites and at
// top-level sites. Throws DomainError when v cannot reach the target.
std::optional<ShockAge> detect_shock(const PassageField& pf, SitePoint v,
                                     double tol_tie);

// Rebuilds the island hanging from an instability tip out of competition
// interfaces alone. The two geodesic bundles out of the island cross the
// tip row a few cells off the pinch, so each sign's field is referenced at
// its own bundle crossing, found by tracing the extreme geodesics from the
// cells under the tip straddle. The minus field's right interface then
// tracks the last cell still committed left of the minus bundle (the
// island's left boundary cell) and the plus field's right interface tracks
// the last cell still tied into the plus bundle (one left of the island's
// right boundary cell). Below a genuine tip the pair is misordered (minus
// at or left of plus); it is followed downward until the order breaks,
// which marks the bottom row. The result uses extract_islands conventions.
// Returns nullopt when the pair is not misordered (a dust point). Throws
// TruncationError when an interface is undefined below the tip or the pair
// stays misordered down to level 0.
std::optional<Island> reconstruct_island_from_tip(SitePoint tip,
                                                  const EnvironmentField& env,
                                                  const DifferenceField& df);

}  // namespace lpp
