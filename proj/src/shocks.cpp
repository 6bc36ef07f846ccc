#include "lpp/shocks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lpp {

namespace {

constexpr double qnan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

BoundaryField solve_to_boundary(const EnvironmentField& env, int top_level,
                                std::span<const double> payoff) {
  if (env.kind() != EnvKind::SemiDiscrete) {
    throw CapabilityError(
        "solve_to_boundary: requires a semi-discrete environment");
  }
  if (top_level < 0 || top_level >= env.n_levels()) {
    throw ParamError("solve_to_boundary: top_level out of range");
  }
  const int width = env.width();
  if (static_cast<int>(payoff.size()) != width) {
    throw ParamError("solve_to_boundary: payoff must cover the full width");
  }
  bool any_finite = false;
  for (double p : payoff) {
    if (std::isnan(p) || p == std::numeric_limits<double>::infinity()) {
      throw ParamError("solve_to_boundary: payoff must be finite or -inf");
    }
    any_finite |= p != neg_inf;
  }
  if (!any_finite) {
    throw ParamError("solve_to_boundary: payoff excludes every column");
  }

  BoundaryField bf;
  bf.env = &env;
  bf.top_level = top_level;
  bf.values.assign(static_cast<std::size_t>(top_level + 1) * width, neg_inf);

  // Same suffix-max recursion as the single-target solve, with the top row
  // seeded by the payoff instead of a point target. -inf terms drop out of
  // the running max on their own.
  double* row = bf.values.data() + static_cast<std::size_t>(top_level) * width;
  const double* b = env.level_data(top_level);
  double m = neg_inf;
  for (int j = width - 1; j >= 0; --j) {
    m = std::max(m, b[j] + payoff[j]);
    row[j] = m == neg_inf ? neg_inf : m - b[j];
  }
  for (int level = top_level - 1; level >= 0; --level) {
    const double* bl = env.level_data(level);
    double* cur = bf.values.data() + static_cast<std::size_t>(level) * width;
    const double* up = cur + width;
    m = neg_inf;
    for (int j = width - 1; j >= 0; --j) {
      m = std::max(m, bl[j] + up[j]);
      cur[j] = m == neg_inf ? neg_inf : m - bl[j];
    }
  }
  return bf;
}

CompetitionField competition_field(const EnvironmentField& env,
                                   const DifferenceField& df,
                                   SitePoint reference, Sign sign) {
  if (env.kind() != EnvKind::SemiDiscrete) {
    throw CapabilityError(
        "competition_field: requires a semi-discrete environment");
  }
  if (&df.env() != &env) {
    throw ParamError(
        "competition_field: difference field built on another environment");
  }
  if (sign == Sign::Untagged) {
    throw ParamError("competition_field: sign must be Minus or Plus");
  }
  const int top = env.n_levels() - 1;
  const int t = reference.level;
  if (t < 1 || t > top) {
    throw ParamError("competition_field: reference level must lie in [1, top]");
  }
  const PassageField& pf = sign == Sign::Minus ? df.minus : df.plus;
  if (!pf.reachable(reference)) {
    throw ParamError(
        "competition_field: reference cannot reach the signed target");
  }

  const int width = env.width();
  const int a = reference.x;
  const int cone = pf.target.x;
  const double base = pf.value(df.anchor.level, df.anchor.x);

  CompetitionField cf;
  cf.env = &env;
  cf.reference = reference;
  cf.sign = sign;
  cf.cone_end = cone;
  cf.boundary.assign(width, neg_inf);
  double pay_scale = 0.0;
  for (int y = 0; y <= cone; ++y) {
    cf.boundary[y] = pf.value(t, y) - base;
    pay_scale = std::max(pay_scale, std::fabs(cf.boundary[y]));
  }
  cf.zero_tol = tol_eq(pay_scale);

  std::vector<double> pay_left(width, neg_inf);
  std::vector<double> pay_right(width, neg_inf);
  for (int y = 0; y <= cone; ++y) {
    if (y <= a) pay_left[y] = cf.boundary[y];
    if (y >= a) pay_right[y] = cf.boundary[y];
  }
  const BoundaryField hl = solve_to_boundary(env, t, pay_left);
  const BoundaryField hr = solve_to_boundary(env, t, pay_right);

  cf.d.assign(t, std::vector<double>(width, qnan));
  for (int r = 0; r < t; ++r) {
    std::vector<double>& row = cf.d[r];
    for (int x = 0; x <= cone; ++x) {
      // right term is finite everywhere in the cone; a -inf left term means
      // no arrival at or left of the reference exists, so the row is +inf
      // there and the crossing lies further left
      row[x] = hr.value(r, x) - hl.value(r, x);
    }
    for (int x = 0; x + 1 <= cone; ++x) {
      if (std::isfinite(row[x]) && std::isfinite(row[x + 1])) {
        cf.monotonicity_max_defect =
            std::max(cf.monotonicity_max_defect, row[x] - row[x + 1]);
      }
    }
  }
  return cf;
}

std::pair<ShockInterface, ShockInterface> shock_interfaces_from_point(
    const CompetitionField& cf) {
  ShockInterface left;
  ShockInterface right;
  left.sign = right.sign = cf.sign;
  left.side = Side::Leftmost;
  right.side = Side::Rightmost;
  left.start = right.start = cf.reference;
  const int rows = cf.n_rows();
  left.points.assign(rows, -1);
  right.points.assign(rows, -1);

  const int width = cf.d.empty() ? 0 : static_cast<int>(cf.d.front().size());
  for (int r = 0; r < rows; ++r) {
    const std::vector<double>& row = cf.d[r];
    for (int x = 0; x + 1 < width; ++x) {
      const bool pair_finite =
          std::isfinite(row[x]) && std::isfinite(row[x + 1]);
      if (pair_finite &&
          row[x] - row[x + 1] >
              tol_eq(std::max(std::fabs(row[x]), std::fabs(row[x + 1])))) {
        throw DomainError(
            "shock_interfaces_from_point: competition row not monotone");
      }
    }
    for (int x = 0; x < width; ++x) {
      if (row[x] >= -cf.zero_tol) {  // +inf qualifies, NaN never compares true
        left.points[r] = x;
        break;
      }
    }
    for (int x = width - 1; x >= 0; --x) {
      if (row[x] <= cf.zero_tol) {
        right.points[r] = x;
        break;
      }
    }
  }
  for (ShockInterface* s : {&left, &right}) {
    for (int r = 0; r + 1 < rows; ++r) {
      if (s->points[r] >= 0 && s->points[r + 1] >= 0) {
        s->max_jump =
            std::max(s->max_jump, std::abs(s->points[r + 1] - s->points[r]));
      }
    }
  }
  return {std::move(left), std::move(right)};
}

std::optional<ShockAge> detect_shock(const PassageField& pf, SitePoint v,
                                     double tol_tie) {
  if (!pf.reachable(v)) {
    throw DomainError("detect_shock: site cannot reach the target");
  }
  if (v.level == pf.target.level) return std::nullopt;
  const Geodesic gl = extract_geodesic(pf, v, Side::Leftmost, tol_tie);
  const Geodesic gr = extract_geodesic(pf, v, Side::Rightmost, tol_tie);
  if (gl.runs.front().x_out == gr.runs.front().x_out) return std::nullopt;
  const int meet = first_meet_level_after(gl, gr, v.level);
  if (meet < 0) {
    // both geodesics end at the same target, so a re-meet level exists
    throw InconsistencyError("detect_shock: split geodesics never re-met");
  }
  return ShockAge{meet - v.level, meet == pf.target.level};
}

std::optional<Island> reconstruct_island_from_tip(SitePoint tip,
                                                  const EnvironmentField& env,
                                                  const DifferenceField& df) {
  const int t2 = tip.level;
  const int cone = df.cone_end();
  if (t2 < 1 || t2 >= env.n_levels() || tip.x < 0 || tip.x + 1 > cone) {
    throw ParamError("reconstruct_island_from_tip: tip straddle out of range");
  }

  // Reference each sign's competition field at its own bundle crossing of
  // the tip row; the pinch cell itself is off the bundle by a few cells of
  // within-row wander, which would break the island rows' tie.
  const Geodesic gm = extract_geodesic(df.minus, {t2 - 1, tip.x},
                                       Side::Rightmost, default_tol_tie);
  const Geodesic gp = extract_geodesic(df.plus, {t2 - 1, tip.x + 1},
                                       Side::Leftmost, default_tol_tie);
  const SitePoint ref_m{t2, gm.run_at(t2).x_in};
  const SitePoint ref_p{t2, gp.run_at(t2).x_in};

  const CompetitionField cfm = competition_field(env, df, ref_m, Sign::Minus);
  const CompetitionField cfp = competition_field(env, df, ref_p, Sign::Plus);
  const auto minus_pair = shock_interfaces_from_point(cfm);
  const auto plus_pair = shock_interfaces_from_point(cfp);
  // um: last cell committed left of the minus bundle (left boundary cell);
  // up: last cell tied into the plus bundle (right boundary cell - 1)
  const std::vector<int>& um = minus_pair.second.points;
  const std::vector<int>& up = plus_pair.second.points;

  int r = t2 - 1;
  if (um[r] < 0 || up[r] < 0) {
    throw TruncationError(
        "reconstruct_island_from_tip: interface undefined below the tip");
  }
  if (um[r] > up[r]) return std::nullopt;

  int t1 = -1;
  for (--r; r >= 0; --r) {
    if (um[r] < 0 || up[r] < 0) {
      throw TruncationError(
          "reconstruct_island_from_tip: interface left the window");
    }
    if (um[r] > up[r]) {
      t1 = r;
      break;
    }
  }
  if (t1 < 0) {
    throw TruncationError(
        "reconstruct_island_from_tip: interfaces misordered down to level 0");
  }

  Island isl;
  isl.t1 = t1;
  isl.t2 = t2;
  isl.tip = tip;
  for (int k = t1; k <= t2; ++k) {
    if (k == t2) {
      // the interfaces launch from the tip itself; close the top with the
      // same one-cell pinch the extraction writes
      isl.left_x.push_back(tip.x);
      isl.right_x.push_back(tip.x + 1);
    } else if (k == t1) {
      // order broke: the pair brackets the bottom straddle
      isl.left_x.push_back(up[k]);
      isl.right_x.push_back(um[k]);
    } else {
      isl.left_x.push_back(um[k]);
      isl.right_x.push_back(up[k] + 1);
    }
  }
  isl.bottom = {t1, isl.left_x.front()};
  return isl;
}

}  // namespace lpp
