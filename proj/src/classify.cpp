#include "lpp/classify.hpp"

#include <algorithm>

namespace lpp {

namespace {

// a weakly left of b: pointwise run comparison over the shared levels
bool geo_leq(const Geodesic& a, const Geodesic& b) {
  const int lo = std::max(a.runs.front().level, b.runs.front().level);
  const int hi = std::min(a.runs.back().level, b.runs.back().level);
  for (int level = lo; level <= hi; ++level) {
    const Geodesic::LevelRun& ra = a.run_at(level);
    const Geodesic::LevelRun& rb = b.run_at(level);
    if (ra.x_in > rb.x_in || ra.x_out > rb.x_out) return false;
  }
  return true;
}

void require_leq(const Geodesic& a, const Geodesic& b, const char* pair) {
  if (!geo_leq(a, b)) {
    throw InconsistencyError(
        std::string("classify_configuration: ordering chain violated at ") +
        pair);
  }
}

void add_note(ConfigClass& c, const char* note) {
  c.borderline = true;
  if (!c.note.empty()) c.note += "; ";
  c.note += note;
}

// -1: the middle re-meets the left extreme first, +1 the right, 0 a tie
int middle_direction(const GeodesicBundle& b, int sign_idx) {
  const int m = sign_idx == 0 ? SlotMMinus : SlotMPlus;
  const int l = sign_idx == 0 ? SlotLMinus : SlotLPlus;
  const int r = sign_idx == 0 ? SlotRMinus : SlotRPlus;
  const int ml = b.meet[m][l];
  const int mr = b.meet[m][r];
  if (ml < mr) return -1;
  if (mr < ml) return +1;
  return 0;
}

Geodesic middle_from_candidate(const PassageField& pf, SitePoint origin,
                               int jump_x, double tol_tie) {
  Geodesic g = extract_geodesic(pf, {origin.level + 1, jump_x},
                                Side::Leftmost, tol_tie);
  g.runs.insert(g.runs.begin(), {origin.level, origin.x, jump_x});
  return g;
}

}  // namespace

GeodesicBundle build_bundle(const DifferenceField& df, SitePoint origin,
                            double tol_tie) {
  const int top = df.n_levels() - 1;
  if (origin.level < 0 || origin.level >= top) {
    throw ParamError("build_bundle: origin must sit below the top level");
  }
  const SitePoint right_cell{origin.level, origin.x + 1};
  if (origin.x < 0 || !df.minus.reachable(right_cell)) {
    throw DomainError("build_bundle: straddle cannot reach both targets");
  }

  GeodesicBundle b;
  b.df = &df;
  b.origin = origin;
  b.no_sign = df.env().kind() == EnvKind::Exponential;

  const int n_signs = b.no_sign ? 1 : 2;
  for (int s = 0; s < n_signs; ++s) {
    const PassageField& pf = s == 0 ? df.minus : df.plus;
    const int base = 3 * s;
    b.geos[base + 0] = extract_geodesic(pf, origin, Side::Leftmost, tol_tie);
    b.geos[base + 2] =
        extract_geodesic(pf, right_cell, Side::Rightmost, tol_tie);
    const int zl = b.geos[base + 0].runs.front().x_out;
    const int zr = b.geos[base + 2].runs.front().x_out;

    // middles anchor at the cell whose extreme they can replace
    const SitePoint anchor = s == 0 ? origin : right_cell;
    bool distinct = false;
    for (int c : first_step_candidates(pf, anchor, tol_tie)) {
      if (c <= zl || c >= zr) continue;
      Geodesic g = middle_from_candidate(pf, anchor, c, tol_tie);
      // a genuine middle stays off both extremes for at least one level
      if (first_meet_level_after(g, b.geos[base + 0], origin.level) >
              origin.level + 1 &&
          first_meet_level_after(g, b.geos[base + 2], origin.level) >
              origin.level + 1) {
        b.geos[base + 1] = std::move(g);
        distinct = true;
        break;
      }
    }
    if (!distinct) {
      b.geos[base + 1] = s == 0 ? b.geos[base + 0] : b.geos[base + 2];
    }
    b.middle_distinct[s] = distinct;
  }
  if (b.no_sign) {
    for (int i = 0; i < 3; ++i) b.geos[3 + i] = b.geos[i];
    b.middle_distinct[1] = b.middle_distinct[0];
  }

  for (int i = 0; i < 6; ++i) {
    b.first_jump[i] = b.geos[i].runs.front().x_out;
  }
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      b.meet[i][j] =
          first_meet_level_after(b.geos[i], b.geos[j], origin.level);
      int sp = -1;
      for (int level = origin.level; level <= top; ++level) {
        const Geodesic::LevelRun& ri = b.geos[i].run_at(level);
        const Geodesic::LevelRun& rj = b.geos[j].run_at(level);
        if (ri.x_in != rj.x_in || ri.x_out != rj.x_out) {
          sp = level;
          break;
        }
      }
      b.split[i][j] = sp;
    }
  }
  return b;
}

ConfigClass classify_configuration(const GeodesicBundle& b,
                                   const InstabilityGraph& graph) {
  if (b.df == nullptr || b.geos[SlotLMinus].runs.empty()) {
    throw ParamError("classify_configuration: bundle not built");
  }
  require_leq(b.geos[SlotLMinus], b.geos[SlotMMinus], "L-/M-");
  require_leq(b.geos[SlotMMinus], b.geos[SlotRMinus], "M-/R-");
  require_leq(b.geos[SlotLPlus], b.geos[SlotMPlus], "L+/M+");
  require_leq(b.geos[SlotMPlus], b.geos[SlotRPlus], "M+/R+");
  require_leq(b.geos[SlotLMinus], b.geos[SlotLPlus], "L-/L+");
  require_leq(b.geos[SlotRMinus], b.geos[SlotRPlus], "R-/R+");

  ConfigClass out;
  // a sign carries a shock when its straddle extremes fail to fall into a
  // shared cell right away: re-meeting above origin.level + 1, or never
  const auto separated = [&](int i, int j) {
    const int m = b.meet[i][j];
    return m < 0 || m > b.origin.level + 1;
  };
  const bool mshock = separated(SlotLMinus, SlotRMinus);
  const bool pshock = separated(SlotLPlus, SlotRPlus);
  out.minus_shock = mshock;
  out.plus_shock = pshock;

  if (b.no_sign) {
    out.group = ConfigGroup::StableNoSign;
    if (!mshock) {
      out.class_id = 1;
    } else if (!b.middle_distinct[0]) {
      out.class_id = 2;
    } else {
      const int dir = middle_direction(b, 0);
      out.class_id = dir > 0 ? 4 : 3;
      if (dir == 0) add_note(out, "middle re-met both extremes at one level");
    }
    return out;
  }

  // the straddle touches the instability graph when either cell does
  bool member = false;
  int member_x = b.origin.x;
  if (b.origin.level < static_cast<int>(graph.level_points.size())) {
    const std::vector<int>& points =
        graph.level_points[static_cast<std::size_t>(b.origin.level)];
    for (int x : {b.origin.x, b.origin.x + 1}) {
      if (std::binary_search(points.begin(), points.end(), x)) {
        member = true;
        member_x = x;
        break;
      }
    }
  }
  bool iso_left = false;
  bool iso_right = false;
  if (member) {
    const LevelProfile prof = make_level_profile(*b.df, b.origin.level);
    iso_left = isolation_test(prof, member_x, IsoSide::Left, graph.tol_flat);
    iso_right = isolation_test(prof, member_x, IsoSide::Right, graph.tol_flat);
  }

  const bool stable = b.meet[SlotLMinus][SlotRPlus] >= 0;
  if (stable) {
    if (mshock != pshock) {
      // the continuum rules out single-sign shocks off the instability
      // graph, so the window-stable reading is treated as censored
      out.group = ConfigGroup::Dust;
      out.class_id = mshock ? 10 : 11;
      out.special =
          mshock ? SpecialType::SingleMinus : SpecialType::SinglePlus;
      add_note(out, "single-sign shock at a window-stable point");
      return out;
    }
    out.group = ConfigGroup::StableSigned;
    if (member) add_note(out, "window-stable at a profile increase point");
    if (!mshock) {
      out.class_id = 5;
      return out;
    }
    out.special = SpecialType::ProperDouble;
    if (b.first_jump[SlotLMinus] != b.first_jump[SlotLPlus] ||
        b.first_jump[SlotRMinus] != b.first_jump[SlotRPlus]) {
      add_note(out, "double shock without paired extremes");
    }
    int dir = 0;
    bool have_middle = false;
    if (b.middle_distinct[0]) {
      dir = middle_direction(b, 0);
      have_middle = true;
      if (b.middle_distinct[1] && middle_direction(b, 1) != dir) {
        add_note(out, "signed middles disagree on direction");
      }
    } else if (b.middle_distinct[1]) {
      dir = middle_direction(b, 1);
      have_middle = true;
    }
    if (!have_middle) {
      out.class_id = 6;
    } else {
      out.class_id = dir > 0 ? 8 : 7;
      if (dir == 0) add_note(out, "middle re-met both extremes at one level");
    }
    return out;
  }

  if (!member) add_note(out, "unstable geodesics at a flat profile point");

  const bool hug_plus =
      pshock && b.first_jump[SlotLMinus] == b.first_jump[SlotLPlus];
  const bool hug_minus =
      mshock && b.first_jump[SlotRMinus] == b.first_jump[SlotRPlus];

  const auto dust_by_shocks = [&] {
    out.group = ConfigGroup::Dust;
    if (mshock && pshock) {
      out.class_id = 12;
      out.special = SpecialType::Snowbird;
      // generic picture: the inner extremes ride one shared route at first
      if (b.meet[SlotRMinus][SlotLPlus] != b.origin.level + 1) {
        add_note(out, "snowbird without shared inner extremes");
      }
    } else if (mshock) {
      out.class_id = 10;
      out.special = SpecialType::SingleMinus;
    } else if (pshock) {
      out.class_id = 11;
      out.special = SpecialType::SinglePlus;
    } else {
      out.class_id = 9;
      out.special = SpecialType::Pns;
    }
  };

  if (member && iso_left && iso_right) {
    add_note(out, "isolated from both sides");
    dust_by_shocks();
    return out;
  }
  if (hug_plus && hug_minus) {
    add_note(out, "simultaneous hugging geometry on both sides");
    dust_by_shocks();
    return out;
  }
  if (hug_plus) {
    out.group = ConfigGroup::HugPlus;
    out.special = SpecialType::HuggingPlus;
    if (member && !iso_left) {
      add_note(out, "hugging geometry without left isolation");
    }
    if (mshock) {
      out.class_id = 16;
    } else if (!b.middle_distinct[1]) {
      out.class_id = 13;
    } else {
      const int dir = middle_direction(b, 1);
      // generic: the plus middle re-meets the far (right) extreme first
      out.class_id = dir < 0 ? 15 : 14;
      if (dir == 0) add_note(out, "middle re-met both extremes at one level");
    }
    return out;
  }
  if (hug_minus) {
    out.group = ConfigGroup::HugMinus;
    out.special = SpecialType::HuggingMinus;
    if (member && !iso_right) {
      add_note(out, "hugging geometry without right isolation");
    }
    if (pshock) {
      out.class_id = 20;
    } else if (!b.middle_distinct[0]) {
      out.class_id = 17;
    } else {
      const int dir = middle_direction(b, 0);
      // generic: the minus middle re-meets the far (left) extreme first
      out.class_id = dir > 0 ? 19 : 18;
      if (dir == 0) add_note(out, "middle re-met both extremes at one level");
    }
    return out;
  }
  if (member && (iso_left || iso_right)) {
    add_note(out, "isolated profile point without hugging geometry");
  }
  dust_by_shocks();
  return out;
}

const char* config_group_name(ConfigGroup g) {
  switch (g) {
    case ConfigGroup::StableNoSign: return "stable_no_sign";
    case ConfigGroup::StableSigned: return "stable_signed";
    case ConfigGroup::Dust: return "dust";
    case ConfigGroup::HugPlus: return "hug_plus";
    case ConfigGroup::HugMinus: return "hug_minus";
  }
  return "unknown";
}

const char* special_type_name(SpecialType s) {
  switch (s) {
    case SpecialType::None: return "none";
    case SpecialType::Pns: return "pns";
    case SpecialType::Snowbird: return "snowbird";
    case SpecialType::SingleMinus: return "single_minus";
    case SpecialType::SinglePlus: return "single_plus";
    case SpecialType::HuggingMinus: return "hugging_minus";
    case SpecialType::HuggingPlus: return "hugging_plus";
    case SpecialType::ProperDouble: return "proper_double";
  }
  return "unknown";
}

}  // namespace lpp
