#pragma once

#include "tdenv/catalog.hpp"
#include "tdenv/level.hpp"

namespace tdenv {

/// Design-time normalisers of the difficulty metric.
struct DifficultyConstants {
  double max_roads = 5;             // R_max
  double max_tower_points = 15;     // T_max
  double max_enemies_per_wave = 25; // N_max
  double min_initial_gold = 120;    // I_min
  double min_gold_drop = 40;        // G_min
};

/// Raw level statistics the metric is computed from.
struct DifficultyInputs {
  int roads = 0;
  int tower_points = 0;
  int enemy_types = 0;
  int total_enemy_types = 0;
  double mean_enemies_per_wave = 0.0;
  double initial_gold = 0.0;
  double gold_drop = 0.0;
  double refund_rate = 0.0;
};

struct DifficultyComponents {
  double road = 0.0;      // d_r
  double tower = 0.0;     // d_t
  double enemy = 0.0;     // d_e
  double resource = 0.0;  // d_re
  double total = 0.0;     // D = d_r + d_t + d_e + d_re
  DifficultyInputs inputs;
};

/// Counts roads, tower points, distinct enemy types, the mean wave size and
/// the resource parameters. The gold drop amount is the minimum pickup value.
DifficultyInputs difficulty_inputs(const LevelConfig& level, const EntityCatalog& catalog);

/// Throws ConfigError when initial gold or the drop amount is zero.
DifficultyComponents difficulty(const DifficultyInputs& in, const DifficultyConstants& k = {});

inline DifficultyComponents difficulty(const LevelConfig& level, const EntityCatalog& catalog) {
  return difficulty(difficulty_inputs(level, catalog));
}

}  // namespace tdenv
