#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

#include "tdenv/catalog.hpp"
#include "tdenv/level.hpp"
#include "tdenv/state.hpp"

namespace tdenv {

/// Fog-filtered view of a state, shared by every observation modality.
struct Snapshot {
  struct Tower {
    int point_index = 0;
    Vec2 position = Vec2::Zero();
    TowerType type = TowerType::none;
    int upgrade_level = 0;
    bool frozen = false;
    Vec2 assembly = Vec2::Zero();
  };
  struct Enemy {
    EntityId id = kNoEntity;
    Vec2 position = Vec2::Zero();
    int type = 0;
    std::int64_t health = 0;
  };
  struct Knight {
    EntityId id = kNoEntity;
    Vec2 position = Vec2::Zero();
    std::int64_t health = 0;
  };

  Ticks step = 0;
  double time = 0.0;
  int wave = 1;
  WaveComposition wave_enemies{};
  std::int64_t wave_countdown = 0;  // whole seconds, rounded up
  std::int64_t gold = 0;
  std::int64_t base_health = 0;
  int remaining_waves = 0;
  Vec2 fog_center = Vec2::Zero();
  std::int64_t reinforcements_countdown = 0;
  std::int64_t gold_collection_count = 0;
  std::int64_t friendly_fire_compensation_count = 0;

  std::int64_t hero_revive_countdown = 0;
  bool hero_dead = false;
  bool hero_visible = true;
  Vec2 hero_position = Vec2::Zero();
  std::int64_t hero_health = 0;

  std::vector<Vec2> fire_positions;
  std::vector<Tower> towers;
  std::vector<Enemy> enemies;
  std::vector<Knight> knights;

  bool drop_visible = false;
  Vec2 drop_position = Vec2::Zero();
  std::int64_t drop_lifetime = 0;  // whole seconds, rounded up

  ActionRecord last_action;
  bool fog_obstructs = true;
  int show_range_tower = -1;
};

Snapshot take_snapshot(const GameState& state, const LevelConfig& level);

/// Textual observation as compact JSON (indent < 0) or pretty-printed.
std::string render_text(const GameState& state, const LevelConfig& level,
                        const EntityCatalog& catalog, int indent = -1);
std::string render_text(const Snapshot& snap, const LevelConfig& level,
                        const EntityCatalog& catalog, int indent = -1);

/// Layout of the 759-element structured observation: 44 scalars followed by
/// fixed-capacity blocks. Empty slots hold 0.
namespace layout {
inline constexpr int kScalarCount = 44;
inline constexpr int kMaxEnemies = 50;
inline constexpr int kMaxKnights = 50;
inline constexpr int kTowerFields = 8;
inline constexpr int kEnemyFields = 4;
inline constexpr int kKnightFields = 3;

inline constexpr int kPathsOffset = kScalarCount;
inline constexpr int kPathsSize = kMaxRoads * kMaxWaypointsPerRoad * 2;
inline constexpr int kWaveEnemiesOffset = kPathsOffset + kPathsSize;
inline constexpr int kWaveEnemiesSize = kMaxEnemiesPerWave;
inline constexpr int kFireOffset = kWaveEnemiesOffset + kWaveEnemiesSize;
inline constexpr int kFireSize = kMaxFireZones * 2;
inline constexpr int kTowersOffset = kFireOffset + kFireSize;
inline constexpr int kTowersSize = kMaxTowerPoints * kTowerFields;
inline constexpr int kEnemiesOffset = kTowersOffset + kTowersSize;
inline constexpr int kEnemiesSize = kMaxEnemies * kEnemyFields;
inline constexpr int kKnightsOffset = kEnemiesOffset + kEnemiesSize;
inline constexpr int kKnightsSize = kMaxKnights * kKnightFields;
inline constexpr int kTotal = kKnightsOffset + kKnightsSize;
static_assert(kTotal == 759);

// scalar slots
inline constexpr int kMapCenter = 0;  // 2
inline constexpr int kMapSide = 2;
inline constexpr int kMapLeft = 3;
inline constexpr int kMapRight = 4;
inline constexpr int kMapUpper = 5;
inline constexpr int kMapLower = 6;
inline constexpr int kTowerBox = 7;
inline constexpr int kGoldCollectionCount = 8;
inline constexpr int kFriendlyFireCount = 9;
inline constexpr int kMaxGold = 10;
inline constexpr int kInitialHealth = 11;
inline constexpr int kTotalWaves = 12;
inline constexpr int kInterWaveInterval = 13;
inline constexpr int kGoldRetentionTime = 14;
inline constexpr int kRefundRate = 15;
inline constexpr int kGoldRefreshInterval = 16;
inline constexpr int kGoldPickupMin = 17;
inline constexpr int kGoldPickupMax = 18;
inline constexpr int kDestination = 19;  // 2
inline constexpr int kCurrentStep = 21;
inline constexpr int kCurrentTime = 22;
inline constexpr int kCurrentWave = 23;
inline constexpr int kWaveCountdown = 24;
inline constexpr int kCurrentGold = 25;
inline constexpr int kCurrentHealth = 26;
inline constexpr int kRemainingWaves = 27;
inline constexpr int kFogPosition = 28;  // 2
inline constexpr int kReinforcementsCountdown = 30;
inline constexpr int kHero = 31;  // revive countdown, is dead, x, y, health
inline constexpr int kGoldDrop = 36;  // x, y, remaining lifetime
inline constexpr int kLastAction = 39;  // x, y, index, success, error code
static_assert(kLastAction + 5 == kScalarCount);
}  // namespace layout

/// Structured observation. Throws EnvError naming the block whose capacity a
/// state exceeds.
Eigen::VectorXd flatten(const GameState& state, const LevelConfig& level);
Eigen::VectorXd flatten(const Snapshot& snap, const LevelConfig& level);

/// 512 x 512 RGB frame, row-major, 3 bytes per pixel.
struct PixelFrame {
  static constexpr int kWidth = 512;
  static constexpr int kHeight = 512;
  std::vector<std::uint8_t> rgb;

  std::uint8_t* at(int x, int y) { return rgb.data() + (static_cast<std::size_t>(y) * kWidth + x) * 3; }
  const std::uint8_t* at(int x, int y) const {
    return rgb.data() + (static_cast<std::size_t>(y) * kWidth + x) * 3;
  }
  friend bool operator==(const PixelFrame&, const PixelFrame&) = default;
};

PixelFrame render_pixels(const GameState& state, const LevelConfig& level,
                         const EntityCatalog& catalog);
PixelFrame render_pixels(const Snapshot& snap, const LevelConfig& level,
                         const EntityCatalog& catalog);

/// Map coordinate to pixel coordinate (x right, y up on the map; rows go down).
inline double to_pixel_x(double x) { return (x + kMapHalfExtent) / kMapSideLength * PixelFrame::kWidth; }
inline double to_pixel_y(double y) { return (kMapHalfExtent - y) / kMapSideLength * PixelFrame::kHeight; }

/// Writes an RGB frame (any size) as PNG; throws EnvError on failure.
void write_png(const std::string& path, const std::uint8_t* rgb, int width, int height);
std::vector<std::uint8_t> encode_png(const std::uint8_t* rgb, int width, int height);

/// 64-bit FNV-1a, used for observation digests in trajectories.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace tdenv
