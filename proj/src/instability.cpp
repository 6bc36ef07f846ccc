#include "lpp/instability.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <utility>

#include <json.hpp>

#include "lpp/prng.hpp"

namespace lpp {

LevelProfile make_level_profile(const DifferenceField& df, int level) {
  if (level < 0 || level >= df.n_levels()) {
    throw ParamError("make_level_profile: level out of range");
  }
  LevelProfile p;
  p.level = level;
  const int cone = df.cone_end();
  p.xs.reserve(cone + 1);
  p.f.reserve(cone + 1);
  for (int j = 0; j <= cone; ++j) {
    p.xs.push_back(df.env().x_of(j));
    p.f.push_back(df.f(level, j));
  }
  return p;
}

std::vector<int> points_of_increase(const LevelProfile& p, double tol_flat) {
  const int n = static_cast<int>(p.f.size());
  for (int i = 1; i < n; ++i) {
    const double scale =
        std::max(std::fabs(p.f[i - 1]), std::fabs(p.f[i]));
    if (p.f[i] < p.f[i - 1] - tol_eq(scale)) {
      throw DomainError("points_of_increase: profile decreases beyond tol_eq");
    }
  }
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    const int z = std::max(i - 1, 0);
    const int y = std::min(i + 1, n - 1);
    if (p.f[y] - p.f[z] > tol_flat) in[i] = 1;
  }
  // Discrete closure: a cell flanked by included cells joins the set.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 1; i + 1 < n; ++i) {
      if (!in[i] && in[i - 1] && in[i + 1]) {
        in[i] = 1;
        changed = true;
      }
    }
  }
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (in[i]) out.push_back(i);
  }
  return out;
}

bool isolation_test(const LevelProfile& p, int i, IsoSide side,
                    double tol_flat) {
  const std::vector<int> poi = points_of_increase(p, tol_flat);
  if (!std::binary_search(poi.begin(), poi.end(), i)) {
    throw DomainError("isolation_test: index is not a point of increase");
  }
  const int n = static_cast<int>(p.f.size());
  if (side == IsoSide::Right) {
    if (i + 1 >= n) return false;
    return p.f[i + 1] - p.f[i] <= tol_flat;
  }
  if (i == 0) return false;
  return p.f[i] - p.f[i - 1] <= tol_flat;
}

PsiPaths interfaces_from_point(const DifferenceField& df, SitePoint base,
                               double tol_flat) {
  if (!df.env().in_bounds(base) || base.x > df.cone_end()) {
    throw ParamError("interfaces_from_point: base outside the usable cone");
  }
  const double d_base = df.d(base.level, base.x);
  const int cone = df.cone_end();
  PsiPaths psi;
  psi.tol_flat = tol_flat;
  psi.base = base;
  psi.minus.assign(df.n_levels(), -1);
  psi.plus.assign(df.n_levels(), -1);
  for (int t = 0; t < df.n_levels(); ++t) {
    const double* row = df.D.data() + static_cast<std::size_t>(t) * df.width();
    for (int x = cone; x >= 0; --x) {
      if (row[x] > d_base + tol_flat) {
        psi.minus[t] = x;
        break;
      }
    }
    for (int x = 0; x <= cone; ++x) {
      if (row[x] < d_base - tol_flat) {
        psi.plus[t] = x;
        break;
      }
    }
  }
  return psi;
}

PsiPaths interfaces_from_anchor(const DifferenceField& df, double tol_flat) {
  return interfaces_from_point(df, df.anchor, tol_flat);
}

namespace {

enum class LevelState { Undefined, Pinch, Separated };

LevelState level_state(const PsiPaths& psi, int t) {
  if (!psi.defined(t)) return LevelState::Undefined;
  const int gap = psi.plus[t] - psi.minus[t];
  if (gap >= 2) return LevelState::Separated;
  if (gap == 1) return LevelState::Pinch;
  return LevelState::Undefined;  // overlapping sides: treat as unusable
}

}  // namespace

IslandExtraction extract_islands(const PsiPaths& psi) {
  const int n = psi.n_levels();
  IslandExtraction out;
  std::vector<Island> candidates;
  int t = 0;
  while (t < n) {
    if (level_state(psi, t) != LevelState::Separated) {
      ++t;
      continue;
    }
    int a = t;
    int b = t;
    while (b + 1 < n && level_state(psi, b + 1) == LevelState::Separated) ++b;
    Island isl;
    const bool bottom_ok = a > 0 && level_state(psi, a - 1) == LevelState::Pinch;
    const bool tip_ok = b + 1 < n && level_state(psi, b + 1) == LevelState::Pinch;
    isl.truncated = !(bottom_ok && tip_ok);
    isl.t1 = bottom_ok ? a - 1 : a;
    isl.t2 = tip_ok ? b + 1 : b;
    isl.bottom = {isl.t1, psi.minus[isl.t1]};
    isl.tip = {isl.t2, psi.minus[isl.t2]};
    for (int k = isl.t1; k <= isl.t2; ++k) {
      isl.left_x.push_back(psi.minus[k]);
      isl.right_x.push_back(psi.plus[k]);
    }
    candidates.push_back(std::move(isl));
    t = b + 1;
  }
  // A shared end-pinch level means the closures touch; such neighbors are
  // mesh-resolution artifacts and are reported, never counted.
  for (std::size_t i = 0; i + 1 < candidates.size(); ++i) {
    if (!candidates[i].truncated && !candidates[i + 1].truncated &&
        candidates[i].t2 == candidates[i + 1].t1) {
      candidates[i].contact = true;
      candidates[i + 1].contact = true;
    }
  }
  for (auto& isl : candidates) {
    if (isl.truncated || isl.contact) {
      out.flagged.push_back(std::move(isl));
    } else {
      out.islands.push_back(std::move(isl));
    }
  }
  return out;
}

namespace {

// Interface pair of one level against a fixed reference value, with the
// exact scan conventions of interfaces_from_point.
struct RowBand {
  int minus = -1;  // max x with D > v + tol
  int plus = -1;   // min x with D < v - tol
};

RowBand row_band(const DifferenceField& df, int t, double v, double tol) {
  const int cone = df.cone_end();
  const double* row = df.D.data() + static_cast<std::size_t>(t) * df.width();
  RowBand b;
  for (int x = cone; x >= 0; --x) {
    if (row[x] > v + tol) {
      b.minus = x;
      break;
    }
  }
  for (int x = 0; x <= cone; ++x) {
    if (row[x] < v - tol) {
      b.plus = x;
      break;
    }
  }
  return b;
}

LevelState band_state(const RowBand& b) {
  if (b.minus < 0 || b.plus < 0) return LevelState::Undefined;
  const int gap = b.plus - b.minus;
  if (gap >= 2) return LevelState::Separated;
  if (gap == 1) return LevelState::Pinch;
  return LevelState::Undefined;
}

}  // namespace

IslandExtraction harvest_islands(
    const DifferenceField& df,
    const std::vector<std::vector<int>>& level_points, double tol_flat) {
  const int n = df.n_levels();
  const int cone = df.cone_end();
  const int w = cone + 1;
  if (static_cast<int>(level_points.size()) != n) {
    throw ParamError("harvest_islands: level_points does not match the field");
  }

  // Flat cells: inside the cone and not points of increase.
  std::vector<char> flat(static_cast<std::size_t>(n) * w, 0);
  for (int t = 0; t < n; ++t) {
    const auto& pts = level_points[t];
    std::size_t k = 0;
    for (int x = 0; x <= cone; ++x) {
      while (k < pts.size() && pts[k] < x) ++k;
      const bool marked = k < pts.size() && pts[k] == x;
      flat[static_cast<std::size_t>(t) * w + x] = marked ? 0 : 1;
    }
  }

  std::vector<int> comp(static_cast<std::size_t>(n) * w, -1);
  std::vector<std::pair<int, int>> fill;
  std::vector<Island> candidates;
  std::set<std::tuple<int, int, int, int>> seen;

  int next_id = 0;
  for (int t0 = 0; t0 < n; ++t0) {
    for (int x0 = 0; x0 <= cone; ++x0) {
      const std::size_t i0 = static_cast<std::size_t>(t0) * w + x0;
      if (!flat[i0] || comp[i0] >= 0) continue;
      const double v = df.d(t0, x0);
      const int id = next_id++;
      comp[i0] = id;
      fill.clear();
      fill.push_back({t0, x0});
      for (std::size_t q = 0; q < fill.size(); ++q) {
        const auto [t, x] = fill[q];
        constexpr int dt[4] = {1, -1, 0, 0};
        constexpr int dx[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const int nt = t + dt[k];
          const int nx = x + dx[k];
          if (nt < 0 || nt >= n || nx < 0 || nx > cone) continue;
          const std::size_t ni = static_cast<std::size_t>(nt) * w + nx;
          if (!flat[ni] || comp[ni] >= 0) continue;
          if (std::fabs(df.d(nt, nx) - v) > tol_flat) continue;
          comp[ni] = id;
          fill.push_back({nt, nx});
        }
      }

      // Trace the separated run containing this component's seed row.
      if (band_state(row_band(df, t0, v, tol_flat)) != LevelState::Separated) {
        continue;  // band hits the window edge already at the seed row
      }
      int a = t0;
      while (a > 0 &&
             band_state(row_band(df, a - 1, v, tol_flat)) ==
                 LevelState::Separated) {
        --a;
      }
      int b = t0;
      while (b + 1 < n &&
             band_state(row_band(df, b + 1, v, tol_flat)) ==
                 LevelState::Separated) {
        ++b;
      }
      const bool bottom_ok =
          a > 0 &&
          band_state(row_band(df, a - 1, v, tol_flat)) == LevelState::Pinch;
      const bool tip_ok =
          b + 1 < n &&
          band_state(row_band(df, b + 1, v, tol_flat)) == LevelState::Pinch;
      Island isl;
      isl.truncated = !(bottom_ok && tip_ok);
      isl.t1 = bottom_ok ? a - 1 : a;
      isl.t2 = tip_ok ? b + 1 : b;
      for (int k = isl.t1; k <= isl.t2; ++k) {
        const RowBand rb = row_band(df, k, v, tol_flat);
        isl.left_x.push_back(rb.minus);
        isl.right_x.push_back(rb.plus);
      }
      isl.bottom = {isl.t1, isl.left_x.front()};
      isl.tip = {isl.t2, isl.left_x.back()};
      // A band row is only provably separated when it resolves a flat step;
      // interior instability cells past the jump straddles mean the row is a
      // sub-tolerance drift and the continuum island may pinch there.
      for (int t = isl.t1 + 1; t < isl.t2 && !isl.porous; ++t) {
        const int k = t - isl.t1;
        const auto& pts = level_points[t];
        for (int x = isl.left_x[k] + 2; x <= isl.right_x[k] - 2; ++x) {
          if (std::binary_search(pts.begin(), pts.end(), x)) {
            isl.porous = true;
            break;
          }
        }
      }
      if (seen.insert({isl.t1, isl.t2, isl.bottom.x, isl.tip.x}).second) {
        candidates.push_back(std::move(isl));
      }
    }
  }

  // Closures touch when one island's tip pinch is another's bottom pinch at
  // the same level and overlapping cells; both become mesh artifacts.
  std::map<int, std::vector<std::size_t>> by_t1;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!candidates[i].truncated) by_t1[candidates[i].t1].push_back(i);
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].truncated) continue;
    const auto it = by_t1.find(candidates[i].t2);
    if (it == by_t1.end()) continue;
    for (const std::size_t j : it->second) {
      const Island& top = candidates[j];
      const Island& bot = candidates[i];
      if (bot.left_x.back() <= top.right_x.front() &&
          top.left_x.front() <= bot.right_x.back()) {
        candidates[i].contact = true;
        candidates[j].contact = true;
      }
    }
  }

  IslandExtraction out;
  for (auto& isl : candidates) {
    if (isl.truncated || isl.contact || isl.porous) {
      out.flagged.push_back(std::move(isl));
    } else {
      out.islands.push_back(std::move(isl));
    }
  }
  const auto order = [](const Island& lhs, const Island& rhs) {
    return std::tie(lhs.t1, lhs.bottom.x, lhs.t2, lhs.tip.x) <
           std::tie(rhs.t1, rhs.bottom.x, rhs.t2, rhs.tip.x);
  };
  std::sort(out.islands.begin(), out.islands.end(), order);
  std::sort(out.flagged.begin(), out.flagged.end(), order);
  return out;
}

BoxDimensionReport box_dimension(std::span<const double> points,
                                 std::span<const double> scales) {
  if (points.size() < 200) {
    throw DomainError("box_dimension: need at least 200 points");
  }
  if (scales.size() < 2) {
    throw DomainError("box_dimension: need at least 2 scales");
  }
  std::vector<double> xs(points.begin(), points.end());
  std::sort(xs.begin(), xs.end());
  const double x0 = xs.front();
  if (!(xs.back() > x0)) {
    throw DomainError("box_dimension: degenerate point span");
  }
  BoxDimensionReport report;
  std::vector<double> log_inv_eps, log_n;
  for (double eps : scales) {
    long long prev_box = -1;
    int n_boxes = 0;
    for (double x : xs) {
      const long long box = static_cast<long long>((x - x0) / eps);
      if (box != prev_box) {
        ++n_boxes;
        prev_box = box;
      }
    }
    report.scales.push_back(eps);
    report.counts.push_back(n_boxes);
    log_inv_eps.push_back(std::log(1.0 / eps));
    log_n.push_back(std::log(static_cast<double>(n_boxes)));
  }
  report.slope = least_squares_slope(log_inv_eps, log_n);
  return report;
}

std::vector<double> dyadic_scales(double mesh, double span) {
  std::vector<double> scales;
  if (!(mesh > 0.0) || !(span > 0.0)) return scales;
  const int k_lo = static_cast<int>(std::ceil(std::log2(8.0 / span)));
  const int k_hi = static_cast<int>(std::floor(-std::log2(4.0 * mesh)));
  for (int k = k_lo; k <= k_hi; ++k) {
    scales.push_back(std::ldexp(1.0, -k));
  }
  return scales;
}

int max_consecutive_cells(const std::vector<int>& cells) {
  int best = 0;
  int run = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    run = (i > 0 && cells[i] == cells[i - 1] + 1) ? run + 1 : 1;
    best = std::max(best, run);
  }
  return best;
}

InstabilityGraph build_instability_graph(const DifferenceField& df,
                                         double tol_flat) {
  InstabilityGraph graph;
  graph.tol_flat = tol_flat;
  graph.level_points.resize(df.n_levels());
  for (int t = 0; t < df.n_levels(); ++t) {
    graph.level_points[t] =
        points_of_increase(make_level_profile(df, t), tol_flat);
  }
  graph.psi = interfaces_from_anchor(df, tol_flat);
  graph.islands = harvest_islands(df, graph.level_points, tol_flat);

  const int anchor_level = df.anchor.level;
  const auto& anchor_points = graph.level_points[anchor_level];
  if (anchor_points.size() >= 200) {
    std::vector<double> xs;
    xs.reserve(anchor_points.size());
    for (int j : anchor_points) xs.push_back(df.env().x_of(j));
    const double mesh =
        df.env().kind() == EnvKind::SemiDiscrete ? df.env().mesh() : 1.0;
    const std::vector<double> scales =
        dyadic_scales(mesh, xs.back() - xs.front());
    if (scales.size() >= 2) {
      graph.dims.push_back({anchor_level, box_dimension(xs, scales)});
    }
  }
  return graph;
}

namespace {

PointRole island_role(const Island& isl, SitePoint p) {
  if (p.level < isl.t1 || p.level > isl.t2) return PointRole::NotInstability;
  const int i = p.level - isl.t1;
  const int left = isl.left_x[i];
  const int right = isl.right_x[i];
  // End pinches are a two-cell straddle of the continuum point.
  if (p.level == isl.t2) {
    return (p.x == left || p.x == right) ? PointRole::Tip
                                         : PointRole::NotInstability;
  }
  if (p.level == isl.t1) {
    return (p.x == left || p.x == right) ? PointRole::Bottom
                                         : PointRole::NotInstability;
  }
  if (p.x == left) return PointRole::LeftBoundary;
  if (p.x == right) return PointRole::RightBoundary;
  return PointRole::NotInstability;
}

}  // namespace

PointRole point_role(const InstabilityGraph& graph, SitePoint p) {
  // Extremal roles first: a pinch cell of one island can coincide with a
  // boundary cell of a neighbor one jump away, and the extremal reading is
  // the defining one for the point.
  for (const Island& isl : graph.islands.islands) {
    const PointRole r = island_role(isl, p);
    if (r == PointRole::Tip || r == PointRole::Bottom) return r;
  }
  for (const Island& isl : graph.islands.islands) {
    const PointRole r = island_role(isl, p);
    if (r != PointRole::NotInstability) return r;
  }
  for (const Island& isl : graph.islands.flagged) {
    if (island_role(isl, p) != PointRole::NotInstability) {
      return PointRole::Flagged;
    }
  }
  const auto& pts = graph.level_points[p.level];
  if (std::binary_search(pts.begin(), pts.end(), p.x)) {
    return PointRole::Dust;
  }
  return PointRole::NotInstability;
}

std::string instability_graph_json(const InstabilityGraph& graph,
                                   const DifferenceField& df) {
  const EnvironmentField& env = df.env();
  nlohmann::json j;
  j["prng_id"] = prng_id;
  j["seed"] = env.seed();
  j["tol_flat"] = graph.tol_flat;

  nlohmann::json levels = nlohmann::json::array();
  for (int t = 0; t < df.n_levels(); ++t) {
    nlohmann::json pts = nlohmann::json::array();
    for (int x : graph.level_points[t]) pts.push_back(env.x_of(x));
    levels.push_back({{"t", t}, {"points", std::move(pts)}});
  }
  j["levels"] = std::move(levels);

  auto island_json = [&](const Island& isl) {
    nlohmann::json left = nlohmann::json::array();
    nlohmann::json right = nlohmann::json::array();
    for (int x : isl.left_x) left.push_back(env.x_of(x));
    for (int x : isl.right_x) right.push_back(env.x_of(x));
    nlohmann::json out{
        {"tip", {{"level", isl.tip.level}, {"x", env.x_of(isl.tip.x)}}},
        {"bottom",
         {{"level", isl.bottom.level}, {"x", env.x_of(isl.bottom.x)}}},
        {"left", std::move(left)},
        {"right", std::move(right)},
        {"t1", isl.t1},
        {"t2", isl.t2}};
    return out;
  };
  nlohmann::json islands = nlohmann::json::array();
  for (const Island& isl : graph.islands.islands) {
    islands.push_back(island_json(isl));
  }
  j["islands"] = std::move(islands);
  nlohmann::json flagged = nlohmann::json::array();
  for (const Island& isl : graph.islands.flagged) {
    nlohmann::json f = island_json(isl);
    f["truncated"] = isl.truncated;
    f["contact"] = isl.contact;
    f["porous"] = isl.porous;
    flagged.push_back(std::move(f));
  }
  j["flagged_islands"] = std::move(flagged);

  nlohmann::json psi_minus = nlohmann::json::array();
  nlohmann::json psi_plus = nlohmann::json::array();
  for (int t = 0; t < graph.psi.n_levels(); ++t) {
    psi_minus.push_back(graph.psi.minus[t] < 0
                            ? nlohmann::json(nullptr)
                            : nlohmann::json(env.x_of(graph.psi.minus[t])));
    psi_plus.push_back(graph.psi.plus[t] < 0
                           ? nlohmann::json(nullptr)
                           : nlohmann::json(env.x_of(graph.psi.plus[t])));
  }
  j["psi"] = {{"minus", std::move(psi_minus)}, {"plus", std::move(psi_plus)}};

  nlohmann::json dims = nlohmann::json::array();
  for (const LevelDimension& d : graph.dims) {
    dims.push_back({{"level", d.level}, {"slope", d.report.slope}});
  }
  j["dims"] = std::move(dims);
  return j.dump(2);
}

}  // namespace lpp
