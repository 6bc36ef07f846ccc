#include "lpp/passage.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "lpp/prng.hpp"

namespace lpp {

namespace {

void require_top_level_target(const EnvironmentField& env, SitePoint target) {
  if (!env.in_bounds(target)) {
    throw ParamError("solve_to_target: target out of bounds");
  }
  if (target.level != env.n_levels() - 1) {
    throw ParamError("solve_to_target: target must sit at the top level");
  }
}

}  // namespace

PassageField solve_to_target(const EnvironmentField& env, SitePoint target,
                             Sign sign_tag) {
  require_top_level_target(env, target);
  const int top = target.level;
  const int width = env.width();
  const int tx = target.x;

  PassageField pf;
  pf.env = &env;
  pf.target = target;
  pf.sign_tag = sign_tag;
  pf.values.assign(static_cast<std::size_t>(env.n_levels()) * width, neg_inf);

  double* row = pf.values.data() + static_cast<std::size_t>(top) * width;
  if (env.kind() == EnvKind::Exponential) {
    const double* w = env.level_data(top);
    row[tx] = w[tx];
    for (int c = tx - 1; c >= 0; --c) {
      row[c] = w[c] + row[c + 1];
    }
    for (int level = top - 1; level >= 0; --level) {
      const double* wl = env.level_data(level);
      double* cur = pf.values.data() + static_cast<std::size_t>(level) * width;
      const double* up = cur + width;
      cur[tx] = wl[tx] + up[tx];
      for (int c = tx - 1; c >= 0; --c) {
        cur[c] = wl[c] + std::max(up[c], cur[c + 1]);
      }
    }
  } else {
    const double* b = env.level_data(top);
    for (int j = 0; j <= tx; ++j) {
      row[j] = b[tx] - b[j];
    }
    for (int level = top - 1; level >= 0; --level) {
      const double* bl = env.level_data(level);
      double* cur = pf.values.data() + static_cast<std::size_t>(level) * width;
      const double* up = cur + width;
      double m = neg_inf;
      for (int j = tx; j >= 0; --j) {
        m = std::max(m, bl[j] + up[j]);
        cur[j] = m - bl[j];
      }
    }
  }
  return pf;
}

ForwardField solve_from_source(const EnvironmentField& env, SitePoint source,
                               int top_level) {
  if (!env.in_bounds(source)) {
    throw ParamError("solve_from_source: source out of bounds");
  }
  if (top_level < source.level || top_level >= env.n_levels()) {
    throw ParamError("solve_from_source: top_level out of range");
  }
  const int width = env.width();
  ForwardField ff;
  ff.env = &env;
  ff.source = source;
  ff.top_level = top_level;
  ff.values.assign(
      static_cast<std::size_t>(top_level - source.level + 1) * width, neg_inf);

  double* row = ff.values.data();
  if (env.kind() == EnvKind::Exponential) {
    const double* w = env.level_data(source.level);
    row[source.x] = w[source.x];
    for (int c = source.x + 1; c < width; ++c) {
      row[c] = w[c] + row[c - 1];
    }
    for (int level = source.level + 1; level <= top_level; ++level) {
      const double* wl = env.level_data(level);
      double* cur =
          ff.values.data() +
          static_cast<std::size_t>(level - source.level) * width;
      const double* below = cur - width;
      cur[source.x] = wl[source.x] + below[source.x];
      for (int c = source.x + 1; c < width; ++c) {
        cur[c] = wl[c] + std::max(below[c], cur[c - 1]);
      }
    }
  } else {
    const double* b = env.level_data(source.level);
    for (int j = source.x; j < width; ++j) {
      row[j] = b[j] - b[source.x];
    }
    for (int level = source.level + 1; level <= top_level; ++level) {
      const double* bl = env.level_data(level);
      double* cur =
          ff.values.data() +
          static_cast<std::size_t>(level - source.level) * width;
      const double* below = cur - width;
      double m = neg_inf;
      for (int j = source.x; j < width; ++j) {
        m = std::max(m, below[j] - bl[j]);
        cur[j] = m + bl[j];
      }
    }
  }
  return ff;
}

// The per-level jump decision is the same for both backends once phrased as
// "choose the up-turn point z in [cur, tx] maximizing e(z)": discrete
// e(z) = weight on (cur, z] + G(level+1, z), semi-discrete
// e(z) = B(z) + G(level+1, z). The maximum is computed directly rather than
// reconstructed from G(level, cur), because re-deriving it can land one ulp
// off and admit a strictly suboptimal column when tol_tie is 0.
Geodesic extract_geodesic(const PassageField& pf, SitePoint src, Side side,
                          double tol_tie) {
  const EnvironmentField& env = *pf.env;
  if (!env.in_bounds(src)) {
    throw ParamError("extract_geodesic: source out of bounds");
  }
  if (!pf.reachable(src)) {
    throw DomainError("extract_geodesic: source cannot reach the target");
  }
  if (!(tol_tie >= 0.0) || !std::isfinite(tol_tie)) {
    throw ParamError("extract_geodesic: tol_tie must be finite and >= 0");
  }
  const int top = pf.target.level;
  const int tx = pf.target.x;
  const bool discrete = env.kind() == EnvKind::Exponential;

  Geodesic g;
  g.side = side;
  std::vector<double> e;
  int cur = src.x;
  for (int level = src.level; level < top; ++level) {
    const double* b = env.level_data(level);
    const double* up = pf.level_data(level + 1);
    e.assign(static_cast<std::size_t>(tx - cur + 1), 0.0);
    double best = neg_inf;
    double prefix = 0.0;  // discrete: weights on (cur, z]
    for (int z = cur; z <= tx; ++z) {
      if (discrete && z > cur) prefix += b[z];
      const double v = discrete ? prefix + up[z] : b[z] + up[z];
      e[static_cast<std::size_t>(z - cur)] = v;
      best = std::max(best, v);
    }
    int chosen = -1;
    if (side == Side::Leftmost) {
      for (int z = cur; z <= tx; ++z) {
        if (e[static_cast<std::size_t>(z - cur)] >= best - tol_tie) {
          chosen = z;
          break;
        }
      }
    } else {
      for (int z = tx; z >= cur; --z) {
        if (e[static_cast<std::size_t>(z - cur)] >= best - tol_tie) {
          chosen = z;
          break;
        }
      }
    }
    g.runs.push_back({level, cur, chosen});
    cur = chosen;
  }
  g.runs.push_back({top, cur, tx});
  return g;
}

std::vector<int> first_step_candidates(const PassageField& pf, SitePoint src,
                                       double tol_tie) {
  const EnvironmentField& env = *pf.env;
  if (!pf.reachable(src)) {
    throw DomainError("first_step_candidates: source cannot reach the target");
  }
  const int top = pf.target.level;
  const int tx = pf.target.x;
  if (src.level == top) {
    return {tx};
  }
  const bool discrete = env.kind() == EnvKind::Exponential;
  const double* b = env.level_data(src.level);
  const double* up = pf.level_data(src.level + 1);
  double best = neg_inf;
  std::vector<double> e(static_cast<std::size_t>(tx - src.x + 1));
  double prefix = 0.0;
  for (int z = src.x; z <= tx; ++z) {
    if (discrete && z > src.x) prefix += b[z];
    e[z - src.x] = discrete ? prefix + up[z] : b[z] + up[z];
    best = std::max(best, e[z - src.x]);
  }
  std::vector<int> out;
  for (int z = src.x; z <= tx; ++z) {
    if (e[z - src.x] >= best - tol_tie) out.push_back(z);
  }
  return out;
}

CompositionReport check_composition(const EnvironmentField& env, SitePoint src,
                                    int mid_level, const PassageField& pf,
                                    int n_samples) {
  if (pf.env != &env) {
    throw ParamError("check_composition: passage field belongs to a different environment");
  }
  if (mid_level <= src.level || mid_level >= pf.target.level) {
    throw ParamError("check_composition: need src.level < mid_level < target level");
  }
  if (!pf.reachable(src)) {
    throw DomainError("check_composition: source cannot reach the target");
  }
  if (n_samples < 1) {
    throw ParamError("check_composition: n_samples must be at least 1");
  }
  const bool discrete = env.kind() == EnvKind::Exponential;
  const int tx = pf.target.x;

  CompositionReport report;
  CounterRng rng(env.seed(), stream_sampling);
  std::uint64_t ctr = 0;

  auto defect_for = [&](SitePoint s, int mid) {
    const ForwardField ff = solve_from_source(env, s, mid);
    const double* f = ff.level_data(mid);
    const double* gmid = pf.level_data(mid);
    const double* w = discrete ? env.level_data(mid) : nullptr;
    double best = neg_inf;
    for (int z = s.x; z <= tx; ++z) {
      if (f[z] == neg_inf || gmid[z] == neg_inf) continue;
      const double v = discrete ? f[z] + gmid[z] - w[z] : f[z] + gmid[z];
      best = std::max(best, v);
    }
    const double g_src = pf.value(s.level, s.x);
    const double defect = std::fabs(g_src - best);
    report.max_defect = std::max(report.max_defect, defect);
    report.max_scaled_defect = std::max(report.max_scaled_defect,
                                        defect / (1.0 + std::fabs(g_src)));
    ++report.n_pairs;
  };

  defect_for(src, mid_level);
  const int top = pf.target.level;
  while (report.n_pairs < n_samples) {
    const int s_level =
        static_cast<int>(rng.bits(ctr++) % static_cast<std::uint64_t>(top - 1));
    const int m =
        s_level + 1 +
        static_cast<int>(rng.bits(ctr++) %
                         static_cast<std::uint64_t>(top - s_level - 1));
    const int s_x =
        static_cast<int>(rng.bits(ctr++) % static_cast<std::uint64_t>(tx + 1));
    defect_for({s_level, s_x}, m);
  }
  report.pass = report.max_scaled_defect <= 1e-9;
  return report;
}

double geodesic_weight(const EnvironmentField& env, const Geodesic& g) {
  double total = 0.0;
  if (env.kind() == EnvKind::Exponential) {
    for (const auto& run : g.runs) {
      const double* w = env.level_data(run.level);
      for (int c = run.x_in; c <= run.x_out; ++c) total += w[c];
    }
  } else {
    for (const auto& run : g.runs) {
      const double* b = env.level_data(run.level);
      total += b[run.x_out] - b[run.x_in];
    }
  }
  return total;
}

bool geodesics_meet_at_or_after(const Geodesic& a, const Geodesic& b,
                                int level) {
  const int lo = std::max({level, a.runs.front().level, b.runs.front().level});
  const int hi = std::min(a.runs.back().level, b.runs.back().level);
  for (int k = lo; k <= hi; ++k) {
    const auto& ra = a.run_at(k);
    const auto& rb = b.run_at(k);
    if (std::max(ra.x_in, rb.x_in) <= std::min(ra.x_out, rb.x_out)) {
      return true;
    }
  }
  return false;
}

int first_meet_level_after(const Geodesic& a, const Geodesic& b, int level) {
  const int lo =
      std::max({level + 1, a.runs.front().level, b.runs.front().level});
  const int hi = std::min(a.runs.back().level, b.runs.back().level);
  for (int k = lo; k <= hi; ++k) {
    const auto& ra = a.run_at(k);
    const auto& rb = b.run_at(k);
    if (std::max(ra.x_in, rb.x_in) <= std::min(ra.x_out, rb.x_out)) {
      return k;
    }
  }
  return -1;
}

void export_passage_csv(const PassageField& pf, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("export_passage_csv: cannot open " + path);
  }
  const EnvironmentField& env = *pf.env;
  out << "# prng_id=" << prng_id << " seed=" << env.seed() << " sign="
      << (pf.sign_tag == Sign::Minus
              ? "minus"
              : pf.sign_tag == Sign::Plus ? "plus" : "untagged")
      << " target_level=" << pf.target.level << " target_x="
      << format_double(env.x_of(pf.target.x)) << "\n";
  out << "level,x,G\n";
  for (int level = 0; level < env.n_levels(); ++level) {
    const double* row = pf.level_data(level);
    for (int j = 0; j < env.width(); ++j) {
      out << level << ',' << format_double(env.x_of(j)) << ','
          << (row[j] == neg_inf ? std::string("-inf") : format_double(row[j]))
          << '\n';
    }
  }
  if (!out) {
    throw IoError("export_passage_csv: short write to " + path);
  }
}

}  // namespace lpp
