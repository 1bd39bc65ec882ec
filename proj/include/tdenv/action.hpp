#pragma once

#include "tdenv/catalog.hpp"
#include "tdenv/level.hpp"
#include "tdenv/state.hpp"

namespace tdenv {

enum class ActionType : int {
  build_archer = 0,
  build_magician = 1,
  build_knight = 2,
  upgrade_tower = 3,
  sell_tower = 4,
  show_range = 5,
  noop = 6,
  set_assembly = 7,
  reinforcements = 8,
  move_hero = 9,
  fire_of_rage = 10,
  upgrade_hero = 11,
};

inline constexpr int kActionTypeCount = 12;

/// Error codes reported in Agent_Last_Action_Info. 0 means success.
enum ErrorCode : int {
  kOk = 0,
  kBuildOccupied = 1,
  kBuildNoGold = 2,
  kUpgradeMissing = 3,
  kUpgradeNoGold = 4,
  kSellMissing = 5,
  kNoTowerPoint = 6,
  kAssemblyOutOfRange = 7,
  kReinforcementsCooldown = 8,
  kHeroDead = 9,
  kHeroUpgradeNoGold = 10,
  kShowRangeMissing = 11,
};

/// One agent decision: map coordinates plus an action index in [0, 11].
struct Action {
  double x = 0.0;
  double y = 0.0;
  int c = static_cast<int>(ActionType::noop);

  friend bool operator==(const Action&, const Action&) = default;
};

inline Action noop_action() { return {}; }

/// Throws std::invalid_argument for a non-finite coordinate or an index
/// outside [0, 11]. Coordinates off the map are accepted and clamped.
void check_action(const Action& a);

/// Index of the tower point whose 0.5 x 0.5 box contains p, or -1.
int tower_point_at(const LevelConfig& level, const Vec2& p);

/// First applicable error code for `a` against `state`, or kOk.
int validate_action(const GameState& state, const LevelConfig& level, const EntityCatalog& catalog,
                    const Action& a);

/// Validates, applies the effect if valid, and records the outcome in
/// state.last_action. An invalid action mutates nothing else. Returns the
/// error code.
int execute_action(GameState& state, const LevelConfig& level, const EntityCatalog& catalog,
                   const Action& a);

}  // namespace tdenv
