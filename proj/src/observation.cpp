#include "tdenv/observation.hpp"

#include <cmath>
#include <string>

#include "detail/observation_doc.hpp"
#include "tdenv/errors.hpp"
#include "tdenv/sim.hpp"

namespace tdenv {

using detail::ojson;
using detail::point_json;
using detail::round_to;

Snapshot take_snapshot(const GameState& s, const LevelConfig& level) {
  Snapshot v;
  v.step = s.step_index;
  v.time = s.sim_time();
  v.wave = s.wave_index;
  v.wave_enemies = level.waves[static_cast<std::size_t>(s.wave_index - 1)];
  v.wave_countdown = ceil_seconds(s.wave_countdown);
  v.gold = s.gold;
  v.base_health = s.base_health;
  v.remaining_waves = level.total_waves() - s.waves_spawned;
  v.fog_center = s.fog.center;
  v.reinforcements_countdown = ceil_seconds(s.reinforcements_cooldown);
  v.gold_collection_count = s.gold_collection_count;
  v.friendly_fire_compensation_count = s.friendly_fire_compensation_count;
  v.fog_obstructs = fog_obstructs(s);
  v.show_range_tower = s.show_range_tower;

  const auto hidden = [&](const Vec2& p) {
    return v.fog_obstructs && in_rect(s.fog.center, s.fog.width, s.fog.height, p);
  };

  v.hero_dead = !s.hero.alive;
  v.hero_revive_countdown = ceil_seconds(s.hero.revive_remaining);
  v.hero_visible = !hidden(s.hero.position);
  v.hero_position = s.hero.position;
  v.hero_health = s.hero.health;

  for (const auto& z : s.fire_zones) v.fire_positions.push_back(z.position);

  for (const auto& t : s.towers) {
    const Vec2& p = level.tower_points[static_cast<std::size_t>(t.point_index)].position;
    if (hidden(p)) continue;
    v.towers.push_back({t.point_index, p, t.type, t.upgrade_level, t.frozen_remaining > 0, t.assembly});
  }
  for (const auto& e : s.enemies) {
    if (e.health <= 0 || hidden(e.position)) continue;
    v.enemies.push_back({e.id, e.position, e.type, e.health});
  }
  for (const auto& k : s.knights) {
    if (k.health <= 0 || hidden(k.position)) continue;
    v.knights.push_back({k.id, k.position, k.health});
  }
  if (s.gold_drop && !hidden(s.gold_drop->position)) {
    v.drop_visible = true;
    v.drop_position = s.gold_drop->position;
    v.drop_lifetime = ceil_seconds(s.gold_drop->remaining_lifetime);
  }
  v.last_action = s.last_action;
  return v;
}

namespace detail {

ojson observation_document(const Snapshot& v, const LevelConfig& level,
                           const EntityCatalog& catalog) {
  ojson d = ojson::object();
  d["Map_Center"] = point_json(Vec2::Zero());
  d["Map_Side_Length"] = kMapSideLength;
  d["Map_Left_Boundary"] = -kMapHalfExtent;
  d["Map_Right_Boundary"] = kMapHalfExtent;
  d["Map_Upper_Boundary"] = kMapHalfExtent;
  d["Map_Lower_Boundary"] = -kMapHalfExtent;
  d["Tower_Points_Bounding_Box_Width_Height"] = kTowerBoxSide;
  d["Level_Gold_Coins_Collection_Count"] = v.gold_collection_count;
  d["Level_Friendly_Fire_Compensation_Count"] = v.friendly_fire_compensation_count;
  d["Level_Maximum_Gold_Coins"] = level.max_gold;
  d["Level_Initial_Health"] = level.initial_base_health;
  d["Level_Total_Waves_Number"] = level.total_waves();
  d["Level_Inter_Wave_Interval"] = level.inter_wave_interval;
  d["Level_Selling_Tower_Refund_Rate"] = level.refund_rate;
  d["Level_Gold_Coins_Refresh_Interval"] = level.gold_refresh_interval;
  d["Level_Gold_Coins_Retention_Time"] = level.gold_retention_time;
  d["Level_Gold_Coins_Minimum_Pickup_Amount"] = level.gold_pickup_min;
  d["Level_Gold_Coins_Maximum_Pickup_Amount"] = level.gold_pickup_max;
  ojson paths = ojson::array();
  for (const auto& road : level.roads) {
    ojson r = ojson::array();
    for (const auto& w : road) r.push_back(point_json(w));
    paths.push_back(std::move(r));
  }
  d["Level_Enemy_Movement_Paths"] = std::move(paths);
  d["Level_Enemy_Destination"] = point_json(level.destination);
  d["Level_Current_Step"] = v.step;
  d["Level_Current_Time"] = round_to(v.time, 0.01);
  d["Level_Current_Wave"] = v.wave;
  d["Level_Current_Wave_Enemies"] = v.wave_enemies;
  d["Level_Current_Wave_Countdown"] = std::to_string(v.wave_countdown);
  d["Level_Current_Gold_Coins"] = v.gold;
  d["Level_Current_Health"] = v.base_health;
  d["Level_Remaining_Waves"] = v.remaining_waves;
  d["Level_Fog_Of_War_Position"] = point_json(v.fog_center);
  d["Level_Knight_Reinforcements_Countdown"] = v.reinforcements_countdown;

  ojson hero = ojson::object();
  hero["Hero_Revive_Countdwon"] = v.hero_revive_countdown;
  hero["Is_Hero_Dead"] = v.hero_dead;
  if (v.hero_visible) {
    hero["Hero_Position"] = point_json(v.hero_position);
    hero["Hero_Current_Health"] = v.hero_health;
  }
  d["Level_Hero_Realtime_Status"] = std::move(hero);

  ojson fire = ojson::array();
  for (const auto& p : v.fire_positions) fire.push_back(point_json(p));
  d["Level_Hero_Fire_Of_Rage_Positions"] = std::move(fire);

  ojson towers = ojson::array();
  for (const auto& t : v.towers) {
    ojson o = ojson::object();
    o["Position"] = point_json(t.position);
    o["Tower_Name"] = t.type == TowerType::none ? std::string("Waiting to be Built")
                                                 : catalog.tower(t.type).name;
    o["Is_Bulit"] = t.type != TowerType::none;
    o["Is_Frozen"] = t.frozen;
    o["Knights_Assembly_Position"] = point_json(t.assembly);
    towers.push_back(std::move(o));
  }
  d["Level_Towers_Realtime_Status"] = std::move(towers);

  ojson enemies = ojson::array();
  for (const auto& e : v.enemies) {
    ojson o = ojson::object();
    o["Position"] = point_json(e.position);
    o["Name"] = catalog.enemy(e.type).name;
    o["Current_Health"] = e.health;
    enemies.push_back(std::move(o));
  }
  d["Level_Enemies_Realtime_Status"] = std::move(enemies);

  ojson knights = ojson::array();
  for (const auto& k : v.knights) {
    ojson o = ojson::object();
    o["Position"] = point_json(k.position);
    o["Name"] = "Knight";
    o["Current_Health"] = k.health;
    knights.push_back(std::move(o));
  }
  d["Level_Knights_Realtime_Status"] = std::move(knights);

  ojson drop = ojson::object();
  if (v.drop_visible) {
    drop["Position"] = point_json(v.drop_position);
    drop["RemainingLifetime"] = v.drop_lifetime;
  }
  d["Level_Dropped_Gold_Coins_Realtime_Status"] = std::move(drop);

  ojson last = ojson::object();
  last["Position"] = point_json(v.last_action.position);
  last["Action_Index"] = v.last_action.action_index;
  last["Is_Success"] = v.last_action.is_success;
  last["Error_Code"] = v.last_action.error_code;
  d["Agent_Last_Action_Info"] = std::move(last);
  return d;
}

}  // namespace detail

std::string render_text(const Snapshot& snap, const LevelConfig& level,
                        const EntityCatalog& catalog, int indent) {
  return detail::observation_document(snap, level, catalog).dump(indent);
}

std::string render_text(const GameState& state, const LevelConfig& level,
                        const EntityCatalog& catalog, int indent) {
  return render_text(take_snapshot(state, level), level, catalog, indent);
}

namespace {

void put_point(Eigen::VectorXd& out, int at, const Vec2& p) {
  out[at] = round_to(p.x(), 1e-3);
  out[at + 1] = round_to(p.y(), 1e-3);
}

void check_capacity(std::size_t n, int cap, const char* block) {
  if (static_cast<int>(n) > cap)
    throw EnvError(std::string("structured observation: ") + block + " block holds " +
                   std::to_string(cap) + " entries, state has " + std::to_string(n));
}

}  // namespace

Eigen::VectorXd flatten(const Snapshot& v, const LevelConfig& level) {
  using namespace layout;
  check_capacity(level.roads.size(), kMaxRoads, "Level_Enemy_Movement_Paths");
  for (const auto& road : level.roads)
    check_capacity(road.size(), kMaxWaypointsPerRoad, "Level_Enemy_Movement_Paths");
  check_capacity(v.fire_positions.size(), kMaxFireZones, "Level_Hero_Fire_Of_Rage_Positions");
  check_capacity(v.towers.size(), kMaxTowerPoints, "Level_Towers_Realtime_Status");
  check_capacity(v.enemies.size(), kMaxEnemies, "Level_Enemies_Realtime_Status");
  check_capacity(v.knights.size(), kMaxKnights, "Level_Knights_Realtime_Status");

  Eigen::VectorXd o = Eigen::VectorXd::Zero(kTotal);
  put_point(o, kMapCenter, Vec2::Zero());
  o[layout::kMapSide] = kMapSideLength;
  o[kMapLeft] = -kMapHalfExtent;
  o[kMapRight] = kMapHalfExtent;
  o[kMapUpper] = kMapHalfExtent;
  o[kMapLower] = -kMapHalfExtent;
  o[kTowerBox] = kTowerBoxSide;
  o[kGoldCollectionCount] = static_cast<double>(v.gold_collection_count);
  o[kFriendlyFireCount] = static_cast<double>(v.friendly_fire_compensation_count);
  o[kMaxGold] = static_cast<double>(level.max_gold);
  o[kInitialHealth] = static_cast<double>(level.initial_base_health);
  o[kTotalWaves] = level.total_waves();
  o[kInterWaveInterval] = level.inter_wave_interval;
  o[kGoldRetentionTime] = static_cast<double>(level.gold_retention_time);
  o[kRefundRate] = level.refund_rate;
  o[kGoldRefreshInterval] = static_cast<double>(level.gold_refresh_interval);
  o[kGoldPickupMin] = static_cast<double>(level.gold_pickup_min);
  o[kGoldPickupMax] = static_cast<double>(level.gold_pickup_max);
  put_point(o, kDestination, level.destination);
  o[kCurrentStep] = static_cast<double>(v.step);
  o[kCurrentTime] = round_to(v.time, 0.01);
  o[kCurrentWave] = v.wave;
  o[kWaveCountdown] = static_cast<double>(v.wave_countdown);
  o[kCurrentGold] = static_cast<double>(v.gold);
  o[kCurrentHealth] = static_cast<double>(v.base_health);
  o[kRemainingWaves] = v.remaining_waves;
  put_point(o, kFogPosition, v.fog_center);
  o[kReinforcementsCountdown] = static_cast<double>(v.reinforcements_countdown);
  o[kHero] = static_cast<double>(v.hero_revive_countdown);
  o[kHero + 1] = v.hero_dead ? 1.0 : 0.0;
  if (v.hero_visible) {
    put_point(o, kHero + 2, v.hero_position);
    o[kHero + 4] = static_cast<double>(v.hero_health);
  }
  if (v.drop_visible) {
    put_point(o, kGoldDrop, v.drop_position);
    o[kGoldDrop + 2] = static_cast<double>(v.drop_lifetime);
  }
  put_point(o, kLastAction, v.last_action.position);
  o[kLastAction + 2] = v.last_action.action_index;
  o[kLastAction + 3] = v.last_action.is_success ? 1.0 : 0.0;
  o[kLastAction + 4] = v.last_action.error_code;

  for (std::size_t r = 0; r < level.roads.size(); ++r)
    for (std::size_t w = 0; w < level.roads[r].size(); ++w)
      put_point(o, kPathsOffset + static_cast<int>((r * kMaxWaypointsPerRoad + w) * 2), level.roads[r][w]);
  for (std::size_t i = 0; i < v.wave_enemies.size(); ++i)
    o[kWaveEnemiesOffset + static_cast<int>(i)] = v.wave_enemies[i];
  for (std::size_t i = 0; i < v.fire_positions.size(); ++i)
    put_point(o, kFireOffset + static_cast<int>(i) * 2, v.fire_positions[i]);
  for (std::size_t i = 0; i < v.towers.size(); ++i) {
    const auto& t = v.towers[i];
    const int at = kTowersOffset + static_cast<int>(i) * kTowerFields;
    put_point(o, at, t.position);
    o[at + 2] = static_cast<int>(t.type);
    o[at + 3] = t.type != TowerType::none ? 1.0 : 0.0;
    o[at + 4] = t.frozen ? 1.0 : 0.0;
    put_point(o, at + 5, t.assembly);
    o[at + 7] = t.upgrade_level;
  }
  for (std::size_t i = 0; i < v.enemies.size(); ++i) {
    const auto& e = v.enemies[i];
    const int at = kEnemiesOffset + static_cast<int>(i) * kEnemyFields;
    put_point(o, at, e.position);
    o[at + 2] = e.type;
    o[at + 3] = static_cast<double>(e.health);
  }
  for (std::size_t i = 0; i < v.knights.size(); ++i) {
    const auto& k = v.knights[i];
    const int at = kKnightsOffset + static_cast<int>(i) * kKnightFields;
    put_point(o, at, k.position);
    o[at + 2] = static_cast<double>(k.health);
  }
  return o;
}

Eigen::VectorXd flatten(const GameState& state, const LevelConfig& level) {
  return flatten(take_snapshot(state, level), level);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace tdenv
