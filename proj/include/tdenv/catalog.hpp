#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tdenv {

/// Tower type ids as used in the tower table and the textual observation.
enum class TowerType : int { none = 0, knight = 1, magician = 2, archer = 3 };

enum class MovementType { ground, flying };

struct TowerSpec {
  TowerType type = TowerType::none;
  std::string name;
  std::int64_t price = 0;
  double attack_speed = 0.0;  // seconds between attacks (summons for the knight tower)
  std::int64_t attack_damage = 0;
  std::int64_t attack_extra_damage = 0;
  double attack_range = 0.0;  // diameter
  bool can_attack_air = false;
  bool can_attack_ground = false;
  std::int64_t upgrade_price = 0;
  double upgrade_growth = 1.0;
  std::string description;
};

struct KnightSpec {
  std::string file_path;
  std::int64_t health = 0;
  double movement_speed = 0.0;
  double attack_speed = 0.0;
  std::int64_t attack_damage = 0;
  std::int64_t attack_extra_damage = 0;
  double attack_range = 0.0;
  bool can_attack_air = false;
  bool can_attack_ground = true;
  std::int64_t ff_compensation_value = 0;
  double ff_compensation_probability = 0.0;
  std::string description;
};

struct HeroSpec {
  std::string file_path;
  std::int64_t health = 0;
  double movement_speed = 0.0;
  double attack_speed = 0.0;
  std::int64_t attack_damage = 0;
  std::int64_t attack_extra_damage = 0;
  double attack_range = 0.0;
  std::int64_t skill_attack_damage = 0;
  std::int64_t skill_attack_extra_damage = 0;
  std::int64_t skill_cost_health = 0;
  double skill_last_time = 0.0;
  double skill_attack_range = 0.0;
  std::int64_t upgrade_gold_cost = 0;
  std::int64_t upgrade_health_growth = 0;
  double recover_health_per_sec = 0.0;
  double revive_time = 0.0;
  bool can_attack_air = true;
  bool can_attack_ground = true;
  std::string description;
  std::string skill_description;
};

struct ReinforcementSpec {
  int number = 0;
  double exist_time = 0.0;
  std::string description;
};

struct EnemySpec {
  int type = 0;
  std::string file_path;
  std::int64_t health = 0;
  double movement_speed = 0.0;
  double attack_speed = 0.0;
  std::int64_t attack_damage = 0;
  std::int64_t attack_extra_damage = 0;
  std::string name;
  MovementType movement = MovementType::ground;
  std::string description;
  /// Casts a tower freeze on its attack cadence (Orc Sorcerer, Bone Chanter).
  bool freezes_towers = false;
};

inline constexpr int kTowerTypeCount = 3;
inline constexpr int kEnemyTypeCount = 15;

/// Static stat tables. Immutable after load; shared freely across engines.
struct EntityCatalog {
  std::array<TowerSpec, kTowerTypeCount> towers;  // indexed by type id - 1
  KnightSpec knight;
  HeroSpec hero;
  ReinforcementSpec reinforcements;
  std::array<EnemySpec, kEnemyTypeCount> enemies;  // indexed by type id

  /// Compact JSON of each table as stored on disk (minus schema_version),
  /// embedded verbatim in agent prompts.
  std::string towers_json;
  std::string knight_json;
  std::string hero_json;
  std::string reinforcements_json;
  std::string enemies_json;

  const TowerSpec& tower(TowerType t) const { return towers.at(static_cast<int>(t) - 1); }
  const EnemySpec& enemy(int type) const { return enemies.at(static_cast<std::size_t>(type)); }
};

/// Loads towers.json, knight.json, hero.json, reinforcements.json and
/// enemies.json from `dir`. Throws ConfigError on any schema violation.
EntityCatalog load_catalog(const std::filesystem::path& dir);

/// Parses the five tables from in-memory documents.
EntityCatalog parse_catalog(const std::string& towers, const std::string& knight,
                            const std::string& hero, const std::string& reinforcements,
                            const std::string& enemies);

}  // namespace tdenv
