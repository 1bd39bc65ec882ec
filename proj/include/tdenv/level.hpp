#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tdenv/geometry.hpp"

namespace tdenv {

/// Observation capacities; levels exceeding them are rejected at load time.
inline constexpr int kMaxRoads = 5;
inline constexpr int kMaxWaypointsPerRoad = 20;
inline constexpr int kMaxTowerPoints = 15;
inline constexpr int kMaxEnemiesPerWave = 25;

using WaveComposition = std::array<int, 15>;  // enemy count per type id

struct TowerPoint {
  Vec2 position = Vec2::Zero();
  Vec2 assembly = Vec2::Zero();  // default knight assembly point
  bool misleading = false;       // analysis tag: cannot engage any road
};

struct FogConfig {
  Vec2 initial_center = Vec2::Zero();
  double width = 3.5;
  double height = 1.7;
  double speed = 0.2;              // map units per second
  double redirect_interval = 5.0;  // seconds between heading re-draws
};

/// Behavioural constants the tables leave open. Per-level so that level files
/// can tune them; defaults are used when a file omits the "rules" object.
struct RuleKnobs {
  double freeze_duration = 3.0;
  double pickup_radius = 0.15;
  double spawn_interval = 0.5;         // seconds between enemies of one wave
  double enemy_engage_radius = 0.2;    // ground enemies stop for blockers this close
  double knight_contact_radius = 0.15;
  double fire_pulse_interval = 1.0;

  friend bool operator==(const RuleKnobs&, const RuleKnobs&) = default;
};

struct LevelConfig {
  std::string name;
  std::vector<std::vector<Vec2>> roads;
  Vec2 destination = Vec2::Zero();
  std::vector<TowerPoint> tower_points;
  std::vector<WaveComposition> waves;
  double inter_wave_interval = 6.0;
  std::int64_t initial_gold = 0;
  std::int64_t max_gold = 3000;
  std::int64_t initial_base_health = 20;
  double refund_rate = 1.0;
  std::int64_t gold_refresh_interval = 2;  // seconds
  std::int64_t gold_retention_time = 15;   // seconds
  std::int64_t gold_pickup_min = 100;
  std::int64_t gold_pickup_max = 130;
  FogConfig fog;
  Vec2 hero_spawn = Vec2::Zero();
  RuleKnobs rules;
  std::string background;  // editor backdrop image, informational

  int total_waves() const { return static_cast<int>(waves.size()); }
};

/// Checks every LevelConfig invariant; throws ConfigError naming the first
/// violation.
void validate_level(const LevelConfig& level);

/// Parses and validates a level document.
LevelConfig parse_level(const std::string& text);
LevelConfig load_level(const std::filesystem::path& path);

/// Serialises a level in the on-disk schema (inverse of parse_level).
std::string level_to_json(const LevelConfig& level, int indent = 2);

/// "Lv1".."Lv5" resolve to the bundled levels under `config_dir/levels`;
/// anything else is treated as a file path.
std::filesystem::path resolve_level_path(const std::string& ref,
                                         const std::filesystem::path& config_dir);

/// Config directory from TDENV_CONFIG_DIR, falling back to the build-time default.
std::filesystem::path default_config_dir();

inline const std::array<std::string, 5> kBenchmarkLevels = {"Lv1", "Lv2", "Lv3", "Lv4", "Lv5"};

}  // namespace tdenv
