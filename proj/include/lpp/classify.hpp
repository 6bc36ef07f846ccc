#pragma once

#include <array>
#include <string>

#include "lpp/shocks.hpp"

namespace lpp {

// Slot order for the six geodesics of a bundle.
enum GeoSlot : int {
  SlotLMinus = 0,
  SlotMMinus = 1,
  SlotRMinus = 2,
  SlotLPlus = 3,
  SlotMPlus = 4,
  SlotRPlus = 5,
};

// The leftmost / middle / rightmost geodesics around one site for both
// signed fields, plus the pairwise split and re-meet structure the
// classifier reads. The site is realized as the straddle between cells
// origin.x and origin.x + 1: leftmost geodesics launch from the left cell,
// rightmost ones from the right cell, so cell-exact ties (which have
// probability zero off a lattice) are not required for the two families
// to register distinct routes. A middle slot holds a geodesic whose first
// jump lies strictly between the extremes and which stays off both of
// them for at least one full level; when no such geodesic exists the slot
// aliases an extreme (minus: leftmost, plus: rightmost) and
// middle_distinct is false.
//
// On a discrete environment the plus slots mirror the minus ones and
// no_sign is set; classification then uses the unsigned classes.
struct GeodesicBundle {
  const DifferenceField* df = nullptr;
  SitePoint origin;  // left cell of the straddle
  std::array<Geodesic, 6> geos;
  std::array<bool, 2> middle_distinct{};  // [0] minus, [1] plus
  std::array<int, 6> first_jump{};        // x_out of the origin-level run
  // meet[i][j]: first level strictly above the origin where the two share a
  // point; -1 if never inside the window. split[i][j]: first level where
  // the runs differ; -1 if identical throughout.
  std::array<std::array<int, 6>, 6> meet{};
  std::array<std::array<int, 6>, 6> split{};
  bool no_sign = false;
};

// Extracts the six geodesics from the straddle at origin to the difference
// field's two targets. Throws ParamError when origin is at or above the
// top level, DomainError when the straddle cannot reach both targets.
// Near the horizon the finite targets force the signed families apart, so
// classification is meaningful well below the top level.
GeodesicBundle build_bundle(const DifferenceField& df, SitePoint origin,
                            double tol_tie);

enum class ConfigGroup {
  StableNoSign,  // classes 1-4: single unsigned family
  StableSigned,  // classes 5-8: signed families, re-meeting extremes
  Dust,          // classes 9-12: instability, isolated from neither side
  HugPlus,       // classes 13-16: left-isolated, plus pair hugs the left
  HugMinus,      // classes 17-20: right-isolated, minus pair hugs the right
};

enum class SpecialType {
  None,
  Pns,
  Snowbird,
  SingleMinus,
  SinglePlus,
  HuggingMinus,
  HuggingPlus,
  ProperDouble,
};

struct ConfigClass {
  int class_id = 0;  // 1..20, figure reading order
  ConfigGroup group = ConfigGroup::StableNoSign;
  bool minus_shock = false;
  bool plus_shock = false;
  SpecialType special = SpecialType::None;
  // set when a window-resolution artifact forced a fallback rule; the note
  // says which one
  bool borderline = false;
  std::string note;
};

// Decision tree over the bundle geometry with the instability graph as
// cross-check; resolution conflicts pick the structural reading and set
// borderline instead of failing. Throws InconsistencyError when the bundle
// violates the left-to-right ordering chain, so no silent class emerges
// from corrupt input.
ConfigClass classify_configuration(const GeodesicBundle& bundle,
                                   const InstabilityGraph& graph);

const char* config_group_name(ConfigGroup g);
const char* special_type_name(SpecialType s);

}  // namespace lpp
