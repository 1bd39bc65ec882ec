#pragma once

#include <cstdint>

#include "tdenv/catalog.hpp"
#include "tdenv/level.hpp"
#include "tdenv/state.hpp"

namespace tdenv {

/// Fresh episode state: step 0, initial gold and base health, first wave
/// countdown running, rng seeded.
GameState make_initial_state(const LevelConfig& level, const EntityCatalog& catalog,
                             std::uint64_t seed);

/// Advances the world by one 0.02 s tick. Sub-phases run in a fixed order:
/// spawn, move, target, attack, zones, gold, hero upkeep, fog, cooldowns,
/// base hits.
void tick(GameState& state, const LevelConfig& level, const EntityCatalog& catalog);

/// Episode over: base destroyed, or every wave spawned and cleared.
bool is_terminal(const GameState& state, const LevelConfig& level);

/// base + uniform integer in [0, extra]; exactly one draw.
std::int64_t resolve_attack(std::int64_t base_damage, std::int64_t extra_damage, Rng& rng);

/// Enqueues the next wave. Each enemy picks its road independently.
void spawn_wave(GameState& state, const LevelConfig& level);

/// Rolls friendly-fire compensation once per knight killed by Fire of Rage.
void apply_friendly_fire(GameState& state, int killed_knights, const EntityCatalog& catalog);

/// Drop pickup, expiry and refresh.
void update_gold(GameState& state, const LevelConfig& level);

/// Adds gold, discarding anything above the level cap. Returns the amount kept.
std::int64_t add_gold(GameState& state, std::int64_t amount);

/// The fog obstructs unless a Fire of Rage zone is burning inside it.
bool fog_obstructs(const GameState& state);

/// True when `p` is hidden by an obstructing fog.
bool fogged(const GameState& state, const Vec2& p);

/// Stats after `level` upgrades: base * growth^level, rounded.
std::int64_t upgraded_stat(std::int64_t base, double growth, int level);

/// Home position of a knight (tower assembly or reinforcement anchor plus slot offset).
Vec2 knight_home(const GameState& state, const KnightInstance& knight);

int live_knights_of_tower(const GameState& state, int tower_index);

}  // namespace tdenv
