#pragma once

#include <span>
#include <string>
#include <vector>

#include "lpp/busemann.hpp"

namespace lpp {

// One level's nondecreasing difference profile x -> D0 - D(x), sampled on
// the usable window of that level.
struct LevelProfile {
  int level = 0;
  std::vector<double> xs;  // model coordinates, sorted
  std::vector<double> f;   // nondecreasing within tol_eq
};

LevelProfile make_level_profile(const DifferenceField& df, int level);

// Sample indices where the profile genuinely increases: i is included iff
// the bracket gap f(next sample) - f(previous sample) exceeds tol_flat,
// with one-sided brackets at the window edges. The result is then closed
// under the discrete closure: an index whose immediate neighbors are both
// included joins the set. Throws DomainError if f decreases beyond tol_eq.
std::vector<int> points_of_increase(const LevelProfile& p, double tol_flat);

enum class IsoSide { Left, Right };

// Right-isolated iff some strictly-right sample has f within tol_flat of
// f(x_i); by monotonicity this reduces to the adjacent sample. Symmetric on
// the left. Throws DomainError when i is not a point of increase of p.
bool isolation_test(const LevelProfile& p, int i, IsoSide side,
                    double tol_flat);

// Interface pair traced level by level. Entries are spatial indices;
// -1 marks a level where that side is undefined (profile never leaves the
// flat band on that side).
struct PsiPaths {
  std::vector<int> minus;  // per level: max x with f(x) < -tol_flat
  std::vector<int> plus;   // per level: min x with f(x) > +tol_flat
  double tol_flat = 0.0;
  SitePoint base;

  int n_levels() const { return static_cast<int>(minus.size()); }
  bool defined(int level) const {
    return minus[level] >= 0 && plus[level] >= 0;
  }
};

// Thresholds are taken relative to the difference value at the base point.
// Where both sides are defined, minus < plus holds automatically and the
// base site lies strictly between them at its own level.
PsiPaths interfaces_from_point(const DifferenceField& df, SitePoint base,
                               double tol_flat);
PsiPaths interfaces_from_anchor(const DifferenceField& df, double tol_flat);

// A stability island: levels t1..t2 with the interface pair strictly
// separated in the interior and pinched (adjacent indices) at both ends.
// tip/bottom sit at the left cell of the end pinches. Boundary arrays are
// indexed by level - t1.
struct Island {
  SitePoint tip;
  SitePoint bottom;
  int t1 = 0;
  int t2 = 0;
  std::vector<int> left_x;
  std::vector<int> right_x;
  bool truncated = false;  // separation ran into the window edge
  bool contact = false;    // closure touches a neighboring island's closure
  bool porous = false;     // interior core holds instability cells: the run
                           // crossed rows where the value band is a slow
                           // drift rather than a resolved flat step
};

struct IslandExtraction {
  std::vector<Island> islands;  // clean: bounded, pairwise disjoint closures
  std::vector<Island> flagged;  // truncated or contact; reported, never counted
};

// Maximal separated level-runs of the interface pair. Runs reaching the
// window edge, containing an undefined level, or sharing an end pinch level
// with a neighboring run are flagged instead of counted.
IslandExtraction extract_islands(const PsiPaths& psi);

// Census of every island the mesh resolves. Each island is a maximal
// 4-connected component of flat cells (cells not in level_points) whose
// difference values agree within tol_flat; its interface pair is traced
// against the component value with the extract_islands conventions, so a
// census entry and the chain extraction from any of its interior cells
// agree cell for cell. Components clipped by the window edge, the top or
// bottom level, or the cone boundary come back flagged, as do pairs whose
// end pinches touch.
IslandExtraction harvest_islands(
    const DifferenceField& df,
    const std::vector<std::vector<int>>& level_points, double tol_flat);

struct BoxDimensionReport {
  double slope = 0.0;
  std::vector<double> scales;
  std::vector<int> counts;  // occupied boxes per scale
};

// Least-squares slope of log N(eps) against log(1/eps) over the given
// scales. Throws DomainError on fewer than 200 points, fewer than 2 scales,
// or a degenerate point span.
BoxDimensionReport box_dimension(std::span<const double> points,
                                 std::span<const double> scales);

// Dyadic scales 2^-k inside [4*mesh, span/8]; endpoints beyond that range
// are excluded to dodge lattice and finite-size artifacts.
std::vector<double> dyadic_scales(double mesh, double span);

// Longest run of consecutive occupied cells. Reported as a clustering
// metric; runs grow logarithmically with the cell count even though the
// occupied fraction decays under mesh refinement, so no fixed bound holds.
int max_consecutive_cells(const std::vector<int>& cells);

struct LevelDimension {
  int level = 0;
  BoxDimensionReport report;
};

struct InstabilityGraph {
  std::vector<std::vector<int>> level_points;  // per level, sorted indices
  PsiPaths psi;
  IslandExtraction islands;
  std::vector<LevelDimension> dims;
  double tol_flat = 0.0;
};

// Full extraction: per-level points of increase, anchor interfaces, island
// catalog, and a box-dimension estimate on the anchor level whenever that
// level has at least 200 instability points.
InstabilityGraph build_instability_graph(const DifferenceField& df,
                                         double tol_flat);

enum class PointRole {
  NotInstability,
  Tip,
  Bottom,
  LeftBoundary,
  RightBoundary,
  Dust,
  Flagged,  // on a truncated/contact island; excluded from censuses
};

PointRole point_role(const InstabilityGraph& graph, SitePoint p);

std::string instability_graph_json(const InstabilityGraph& graph,
                                   const DifferenceField& df);

}  // namespace lpp
