#pragma once

#include <cstdint>
#include <vector>

#include "lpp/environment.hpp"
#include "lpp/numerics.hpp"

namespace lpp {

enum class Sign { Minus, Plus, Untagged };
enum class Side { Leftmost, Rightmost };

// Last-passage values G(v) = L(v -> target) for every site v, for one fixed
// target at the top level. Sites that cannot reach the target carry -inf,
// never a finite placeholder. Immutable after solve.
struct PassageField {
  const EnvironmentField* env = nullptr;
  SitePoint target;
  Sign sign_tag = Sign::Untagged;
  std::vector<double> values;  // level-major, width() entries per level

  double value(int level, int x) const {
    return values[static_cast<std::size_t>(level) * env->width() + x];
  }
  const double* level_data(int level) const {
    return values.data() + static_cast<std::size_t>(level) * env->width();
  }
  bool reachable(SitePoint v) const {
    return env->in_bounds(v) && value(v.level, v.x) != neg_inf;
  }
};

// Forward companion of PassageField: F(v) = L(source -> v) for levels
// source.level .. top_level. Used by the composition check and by boundary
// analyses; same storage conventions.
struct ForwardField {
  const EnvironmentField* env = nullptr;
  SitePoint source;
  int top_level = 0;
  std::vector<double> values;  // rows for levels source.level .. top_level

  double value(int level, int x) const {
    return values[static_cast<std::size_t>(level - source.level) *
                      env->width() +
                  x];
  }
  const double* level_data(int level) const {
    return values.data() +
           static_cast<std::size_t>(level - source.level) * env->width();
  }
};

// One geodesic as contiguous spatial runs, one per level, levels increasing
// by 1 from source to target. x_in <= x_out; for level k the path occupies
// [x_in, x_out] and jumps to level k+1 at x_out.
struct Geodesic {
  struct LevelRun {
    int level;
    int x_in;
    int x_out;
  };
  std::vector<LevelRun> runs;
  Side side = Side::Leftmost;

  SitePoint source() const { return {runs.front().level, runs.front().x_in}; }
  SitePoint target() const { return {runs.back().level, runs.back().x_out}; }
  const LevelRun& run_at(int level) const {
    return runs[static_cast<std::size_t>(level - runs.front().level)];
  }
  bool covers_level(int level) const {
    return level >= runs.front().level && level <= runs.back().level;
  }
};

struct CompositionReport {
  int n_pairs = 0;
  double max_defect = 0.0;        // absolute
  double max_scaled_defect = 0.0; // defect / (1 + |G(src)|)
  bool pass = false;              // max_scaled_defect <= 1e-9
};

// Backward dynamic program from a top-level target.
//
// Discrete: G(v) = w(v) + max over the admissible up/right successors,
// G(target) = w(target). Semi-discrete: G at level k satisfies the
// running-max recursion G_k(x) = max_{z >= x} (B_k(z) + G_{k+1}(z)) - B_k(x),
// the spatial mirror of the prefix-max form, solved right-to-left per level
// in O(n_levels * width). Throws ParamError unless target is at the top
// level and in bounds.
PassageField solve_to_target(const EnvironmentField& env, SitePoint target,
                             Sign sign_tag);

// Forward dynamic program from a source, computed up to top_level inclusive.
ForwardField solve_from_source(const EnvironmentField& env, SitePoint source,
                               int top_level);

// Forward trace of an extremal geodesic. At each level the next jump point
// is the leftmost (resp. rightmost) maximizer of the local Bellman
// optimality within tol_tie of the maximum. Throws DomainError if src
// cannot reach the target.
Geodesic extract_geodesic(const PassageField& pf, SitePoint src, Side side,
                          double tol_tie);

// All jump candidates within tol_tie of optimal at src's own level: the
// spatial indices z >= src.x maximizing B(z) + G(next level, z) (discrete:
// the optimal first steps). Used for middle-geodesic detection.
std::vector<int> first_step_candidates(const PassageField& pf, SitePoint src,
                                       double tol_tie);

// Verifies G(src) = max_z [ L(src -> (z, mid_level)) + G(z, mid_level) ]
// (discrete splitting subtracts the doubly counted w(z, mid_level)) at the
// given pair and at n_samples-1 further pairs drawn deterministically from
// the environment seed. Throws ParamError unless
// src.level < mid_level < target level.
CompositionReport check_composition(const EnvironmentField& env, SitePoint src,
                                    int mid_level, const PassageField& pf,
                                    int n_samples);

// Sum of the environment along a geodesic: discrete, the weight sum of all
// sites covered; semi-discrete, the sum of path increments over each run.
// Equals G(source) within tol_eq for any geodesic extracted from pf.
double geodesic_weight(const EnvironmentField& env, const Geodesic& g);

// True when the two geodesics share at least one space-time point at or
// after the given level.
bool geodesics_meet_at_or_after(const Geodesic& a, const Geodesic& b,
                                int level);

// First level strictly above `level` at which the two geodesics share a
// point, or -1 if they never do.
int first_meet_level_after(const Geodesic& a, const Geodesic& b, int level);

void export_passage_csv(const PassageField& pf, const std::string& path);

}  // namespace lpp
