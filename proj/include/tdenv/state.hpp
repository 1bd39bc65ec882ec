#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "tdenv/catalog.hpp"
#include "tdenv/clock.hpp"
#include "tdenv/geometry.hpp"
#include "tdenv/rng.hpp"

namespace tdenv {

using EntityId = std::int64_t;
inline constexpr EntityId kNoEntity = -1;
inline constexpr EntityId kHeroId = 0;  // knights and enemies are numbered from 1

struct TowerInstance {
  int point_index = 0;
  TowerType type = TowerType::none;
  int upgrade_level = 0;
  Ticks frozen_remaining = 0;
  std::int64_t invested_gold = 0;
  Vec2 assembly = Vec2::Zero();
  Ticks attack_cooldown = 0;
  EntityId target = kNoEntity;

  bool built() const { return type != TowerType::none; }
  friend bool operator==(const TowerInstance&, const TowerInstance&) = default;
};

struct EnemyInstance {
  EntityId id = kNoEntity;
  int type = 0;
  std::int64_t health = 0;
  Vec2 position = Vec2::Zero();
  int road = 0;
  int waypoint_cursor = 1;
  double progress = 0.0;  // distance covered along the road
  MovementType movement = MovementType::ground;
  Ticks attack_cooldown = 0;
  EntityId blocker = kNoEntity;  // knight id, kHeroId, or none
  bool arrived = false;

  friend bool operator==(const EnemyInstance&, const EnemyInstance&) = default;
};

struct KnightInstance {
  EntityId id = kNoEntity;
  int tower_index = -1;  // -1 for reinforcement knights
  int slot = 0;
  Vec2 position = Vec2::Zero();
  Vec2 anchor = Vec2::Zero();  // deploy point for reinforcements
  std::int64_t health = 0;
  Ticks attack_cooldown = 0;
  Ticks expire_remaining = -1;  // reinforcements only
  EntityId target = kNoEntity;

  bool reinforcement() const { return tower_index < 0; }
  friend bool operator==(const KnightInstance&, const KnightInstance&) = default;
};

struct HeroInstance {
  Vec2 position = Vec2::Zero();
  std::int64_t health = 0;
  std::int64_t max_health = 0;
  std::optional<Vec2> move_target;
  bool alive = true;
  Ticks revive_remaining = 0;  // full revive time while alive
  Ticks attack_cooldown = 0;
  EntityId target = kNoEntity;
  double regen_carry = 0.0;

  friend bool operator==(const HeroInstance&, const HeroInstance&) = default;
};

struct GoldDrop {
  Vec2 position = Vec2::Zero();
  Ticks remaining_lifetime = 0;
  std::int64_t min_pickup = 0;
  std::int64_t max_pickup = 0;

  friend bool operator==(const GoldDrop&, const GoldDrop&) = default;
};

struct FireOfRageZone {
  Vec2 position = Vec2::Zero();
  Ticks remaining = 0;
  Ticks pulse_countdown = 0;
  double radius = 0.25;

  friend bool operator==(const FireOfRageZone&, const FireOfRageZone&) = default;
};

inline constexpr int kMaxFireZones = 10;

struct FogState {
  Vec2 center = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  Ticks redirect_countdown = 0;
  double width = 3.5;
  double height = 1.7;

  friend bool operator==(const FogState&, const FogState&) = default;
};

struct ActionRecord {
  Vec2 position = Vec2::Zero();
  int action_index = 6;
  bool is_success = true;
  int error_code = 0;

  friend bool operator==(const ActionRecord&, const ActionRecord&) = default;
};

struct SpawnOrder {
  int type = 0;
  int road = 0;
  friend bool operator==(const SpawnOrder&, const SpawnOrder&) = default;
};

/// Cumulative gold flows; gold == initial + inflows - spent - discarded.
struct GoldLedger {
  std::int64_t pickups = 0;
  std::int64_t compensation = 0;
  std::int64_t refunds = 0;
  std::int64_t spent = 0;
  std::int64_t discarded = 0;
  friend bool operator==(const GoldLedger&, const GoldLedger&) = default;
};

/// Full mutable world snapshot. Single-threaded: one engine per instance.
struct GameState {
  Ticks step_index = 0;
  std::int64_t gold = 0;
  std::int64_t max_gold = 0;
  std::int64_t base_health = 0;

  int wave_index = 1;  // 1-based wave shown to the player
  int waves_spawned = 0;
  Ticks wave_countdown = 0;
  std::deque<SpawnOrder> spawn_queue;
  Ticks spawn_cooldown = 0;

  std::vector<TowerInstance> towers;  // one per tower point
  std::vector<KnightInstance> knights;
  HeroInstance hero;
  std::vector<EnemyInstance> enemies;
  std::optional<GoldDrop> gold_drop;
  Ticks gold_refresh_countdown = 0;
  std::vector<FireOfRageZone> fire_zones;
  FogState fog;
  Ticks reinforcements_cooldown = 0;

  ActionRecord last_action;
  int show_range_tower = -1;
  Ticks show_range_remaining = 0;

  std::int64_t gold_collection_count = 0;
  std::int64_t friendly_fire_compensation_count = 0;
  std::int64_t enemies_reached_base = 0;
  std::int64_t base_health_lost = 0;
  GoldLedger ledger;

  EntityId next_entity_id = 1;
  Rng rng;

  double sim_time() const { return to_seconds(step_index); }

  friend bool operator==(const GameState&, const GameState&) = default;
};

}  // namespace tdenv
