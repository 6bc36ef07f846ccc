#pragma once

#include <algorithm>
#include <vector>

#include "lpp/environment.hpp"
#include "lpp/numerics.hpp"
#include "lpp/passage.hpp"

// Exhaustive reference solvers for tiny fields. A monotone path from src to a
// top-level target is encoded by its up-turn columns z_k (level k jumps to
// level k+1 at spatial index z_k), one per level below the target level,
// nondecreasing, with src.x <= z_first and z_last <= target.x. Enumerating
// those vectors visits every path exactly once, independently of the
// production dynamic programs.
namespace oracle {

struct PathSet {
  double best = lpp::neg_inf;
  std::vector<std::vector<int>> optimal;  // up-turn vectors achieving best
};

inline double fold_back(const std::vector<double>& weights) {
  double v = weights.back();
  for (std::size_t i = weights.size() - 1; i-- > 0;) v = weights[i] + v;
  return v;
}

// Semi-discrete value: sum of path increments per run, folded from the target
// end with each level's entry offset subtracted as the fold passes it.
inline double semi_path_value(const lpp::EnvironmentField& env,
                              lpp::SitePoint src, lpp::SitePoint tgt,
                              const std::vector<int>& turns) {
  auto b = [&](int level, int j) { return env.path(level, j); };
  const int t = tgt.level;
  if (src.level == t) return b(t, tgt.x) - b(t, src.x);
  double v = b(t, tgt.x) - b(t, turns.back());
  for (int level = t - 1; level >= src.level; --level) {
    int enter = level == src.level
                    ? src.x
                    : turns[static_cast<std::size_t>(level - 1 - src.level)];
    int leave = turns[static_cast<std::size_t>(level - src.level)];
    v = (b(level, leave) + v) - b(level, enter);
  }
  return v;
}

// Discrete value: site weights along the path, folded from the target end so
// the rounding matches a w + max(...) recursion.
inline double discrete_path_value(const lpp::EnvironmentField& env,
                                  lpp::SitePoint src, lpp::SitePoint tgt,
                                  const std::vector<int>& turns) {
  std::vector<double> weights;
  int from = src.x;
  for (int level = src.level; level < tgt.level; ++level) {
    int to = turns[static_cast<std::size_t>(level - src.level)];
    for (int c = from; c <= to; ++c) weights.push_back(env.weight(level, c));
    from = to;
  }
  for (int c = from; c <= tgt.x; ++c) weights.push_back(env.weight(tgt.level, c));
  return fold_back(weights);
}

// Enumerates every admissible up-turn vector and keeps all argmax paths,
// compared with exact double equality.
inline PathSet enumerate_paths(const lpp::EnvironmentField& env,
                               lpp::SitePoint src, lpp::SitePoint tgt) {
  PathSet out;
  const bool discrete = env.kind() == lpp::EnvKind::Exponential;
  const int n_turns = tgt.level - src.level;
  std::vector<int> turns(static_cast<std::size_t>(n_turns));

  auto consider = [&]() {
    double v = discrete ? discrete_path_value(env, src, tgt, turns)
                        : semi_path_value(env, src, tgt, turns);
    if (v > out.best) {
      out.best = v;
      out.optimal.clear();
    }
    if (v == out.best) out.optimal.push_back(turns);
  };

  auto rec = [&](auto&& self, int idx, int lo) -> void {
    if (idx == n_turns) {
      consider();
      return;
    }
    for (int z = lo; z <= tgt.x; ++z) {
      turns[static_cast<std::size_t>(idx)] = z;
      self(self, idx + 1, z);
    }
  };
  rec(rec, 0, src.x);
  return out;
}

inline std::vector<int> leftmost_turns(const PathSet& ps) {
  return *std::min_element(ps.optimal.begin(), ps.optimal.end());
}

inline std::vector<int> rightmost_turns(const PathSet& ps) {
  return *std::max_element(ps.optimal.begin(), ps.optimal.end());
}

// Up-turn vector of a production geodesic, for comparison against the oracle.
inline std::vector<int> geodesic_turns(const lpp::Geodesic& g) {
  std::vector<int> turns;
  for (std::size_t i = 0; i + 1 < g.runs.size(); ++i)
    turns.push_back(g.runs[i].x_out);
  return turns;
}

}  // namespace oracle
