#include "tdenv/difficulty.hpp"

#include "tdenv/errors.hpp"

namespace tdenv {

DifficultyInputs difficulty_inputs(const LevelConfig& level, const EntityCatalog& catalog) {
  DifficultyInputs in;
  in.roads = static_cast<int>(level.roads.size());
  in.tower_points = static_cast<int>(level.tower_points.size());
  in.total_enemy_types = static_cast<int>(catalog.enemies.size());
  long total = 0;
  for (int t = 0; t < kEnemyTypeCount; ++t) {
    bool present = false;
    for (const auto& w : level.waves) present = present || w[t] > 0;
    in.enemy_types += present ? 1 : 0;
  }
  for (const auto& w : level.waves)
    for (int c : w) total += c;
  in.mean_enemies_per_wave =
      level.waves.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(level.waves.size());
  in.initial_gold = static_cast<double>(level.initial_gold);
  in.gold_drop = static_cast<double>(level.gold_pickup_min);
  in.refund_rate = level.refund_rate;
  return in;
}

DifficultyComponents difficulty(const DifficultyInputs& in, const DifficultyConstants& k) {
  if (in.initial_gold <= 0.0) throw ConfigError("difficulty: initial gold must be positive");
  if (in.gold_drop <= 0.0) throw ConfigError("difficulty: gold drop amount must be positive");
  if (in.total_enemy_types <= 0) throw ConfigError("difficulty: empty enemy catalog");
  DifficultyComponents d;
  d.inputs = in;
  d.road = in.roads / k.max_roads;
  d.tower = in.tower_points / k.max_tower_points;
  d.enemy = static_cast<double>(in.enemy_types) / in.total_enemy_types +
            in.mean_enemies_per_wave / k.max_enemies_per_wave;
  d.resource = (k.min_initial_gold / in.initial_gold + k.min_gold_drop / in.gold_drop +
                (1.0 - in.refund_rate)) /
               3.0;
  d.total = d.road + d.tower + d.enemy + d.resource;
  return d;
}

}  // namespace tdenv
