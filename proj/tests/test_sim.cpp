#include <gtest/gtest.h>

#include "tdenv/action.hpp"
#include "tdenv/rng.hpp"
#include "tdenv/sim.hpp"
#include "test_util.hpp"

using namespace tdenv;
using tdenv::testing::catalog;
using tdenv::testing::level;
using tdenv::testing::micro_level;

namespace {

EnemyInstance& add_enemy(GameState& s, const LevelConfig& l, int type, const Vec2& at, double progress) {
  EnemyInstance e;
  e.id = s.next_entity_id++;
  e.type = type;
  e.health = catalog()->enemy(type).health;
  e.position = at;
  e.progress = progress;
  e.movement = catalog()->enemy(type).movement;
  e.road = 0;
  (void)l;
  s.enemies.push_back(e);
  return s.enemies.back();
}

void run_ticks(GameState& s, const LevelConfig& l, int n) {
  for (int i = 0; i < n; ++i) tick(s, l, *catalog());
}

Action at(const Vec2& p, ActionType c) { return {p.x(), p.y(), static_cast<int>(c)}; }

}  // namespace

TEST(Sim, InitialState) {
  const auto l = level("Lv1");
  const GameState s = make_initial_state(*l, *catalog(), 3);
  EXPECT_EQ(s.step_index, 0);
  EXPECT_EQ(s.gold, 500);
  EXPECT_EQ(s.base_health, 20);
  EXPECT_EQ(s.wave_index, 1);
  EXPECT_EQ(s.wave_countdown, 300);
  EXPECT_EQ(s.towers.size(), l->tower_points.size());
  EXPECT_TRUE(s.hero.alive);
  EXPECT_EQ(s.hero.health, 1600);
  EXPECT_EQ(s.hero.position, l->hero_spawn);
  EXPECT_FALSE(s.gold_drop.has_value());
  EXPECT_EQ(s.fog.center, l->fog.initial_center);
  EXPECT_NEAR(s.fog.velocity.norm(), 0.2, 1e-12);
}

TEST(Sim, TickAdvancesStepAndTime) {
  const auto l = level("Lv2");
  GameState s = make_initial_state(*l, *catalog(), 1);
  run_ticks(s, *l, 16);
  EXPECT_EQ(s.step_index, 16);
  EXPECT_NEAR(s.sim_time(), 0.32, 1e-12);
}

TEST(Sim, FirstWaveSpawnsAfterInterWaveInterval) {
  const LevelConfig l = micro_level(3);
  GameState s = make_initial_state(l, *catalog(), 1);
  run_ticks(s, l, 299);
  EXPECT_TRUE(s.enemies.empty());
  EXPECT_EQ(s.waves_spawned, 0);
  run_ticks(s, l, 1);
  EXPECT_EQ(s.waves_spawned, 1);
  ASSERT_EQ(s.enemies.size(), 1u);
  EXPECT_EQ(s.spawn_queue.size(), 2u);
  // remaining enemies follow at the spawn interval
  run_ticks(s, l, 25);
  EXPECT_EQ(s.enemies.size(), 2u);
}

TEST(Sim, EnemyAdvancesSpeedTimesTick) {
  const LevelConfig l = micro_level(1);
  GameState s = make_initial_state(l, *catalog(), 4);
  run_ticks(s, l, 301);
  ASSERT_EQ(s.enemies.size(), 1u);
  const Vec2 p0 = s.enemies[0].position;
  const double prog0 = s.enemies[0].progress;
  run_ticks(s, l, 10);
  EXPECT_NEAR(s.enemies[0].position.x() - p0.x(), 0.1, 1e-9);
  EXPECT_NEAR(s.enemies[0].position.y(), 0.0, 1e-12);
  EXPECT_NEAR(s.enemies[0].progress - prog0, 0.1, 1e-9);
}

TEST(Sim, UnopposedWaveCostsOneHealthPerEnemy) {
  const LevelConfig l = micro_level(2);
  GameState s = make_initial_state(l, *catalog(), 9);
  while (!is_terminal(s, l) && s.step_index < 5000) tick(s, l, *catalog());
  EXPECT_TRUE(is_terminal(s, l));
  EXPECT_EQ(s.base_health, 18);
  EXPECT_EQ(s.base_health_lost, 2);
  EXPECT_EQ(s.enemies_reached_base, 2);
  // 6 s countdown + 12 s walk (6 units at 0.5/s) + 0.5 s spawn spacing
  EXPECT_NEAR(s.sim_time(), 18.5, 0.05);
}

TEST(Sim, BaseHealthFloorsAtZero) {
  LevelConfig l = micro_level(5);
  l.initial_base_health = 2;
  GameState s = make_initial_state(l, *catalog(), 9);
  while (!is_terminal(s, l) && s.step_index < 5000) tick(s, l, *catalog());
  EXPECT_EQ(s.base_health, 0);
  EXPECT_EQ(s.base_health_lost, 2);
  EXPECT_TRUE(is_terminal(s, l));
}

TEST(Sim, WaveCountdownRunsOnlyWhileFieldIsClear) {
  LevelConfig l = micro_level(1);
  l.waves.push_back(l.waves[0]);
  GameState s = make_initial_state(l, *catalog(), 2);
  run_ticks(s, l, 300);
  ASSERT_EQ(s.enemies.size(), 1u);
  EXPECT_EQ(s.wave_index, 2);
  const Ticks countdown = s.wave_countdown;
  run_ticks(s, l, 200);
  EXPECT_EQ(s.wave_countdown, countdown);
  while (!s.enemies.empty()) tick(s, l, *catalog());
  run_ticks(s, l, 10);
  EXPECT_EQ(s.wave_countdown, countdown - 10);
}

TEST(Sim, RoadChoiceIsUniform) {
  const auto l = level("Lv3");
  ASSERT_EQ(l->roads.size(), 3u);
  std::array<int, 3> counts{};
  int total = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    GameState s = make_initial_state(*l, *catalog(), seed);
    spawn_wave(s, *l);
    for (const auto& o : s.spawn_queue) ++counts[static_cast<std::size_t>(o.road)];
    total += static_cast<int>(s.spawn_queue.size());
  }
  for (int c : counts) EXPECT_NEAR(c / static_cast<double>(total), 1.0 / 3.0, 0.05 / 3.0);
}

TEST(Sim, FogMovesAtConfiguredSpeedAndStaysOnMap) {
  const auto l = level("Lv4");
  GameState s = make_initial_state(*l, *catalog(), 12);
  for (int i = 0; i < 20000; ++i) {
    const Vec2 before = s.fog.center;
    tick(s, *l, *catalog());
    const Vec2 d = s.fog.center - before;
    ASSERT_LE(d.norm(), 0.2 * kTickSeconds + 1e-12);
    ASSERT_LE(std::abs(s.fog.center.x()), kMapHalfExtent);
    ASSERT_LE(std::abs(s.fog.center.y()), kMapHalfExtent);
    if (s.base_health <= 0) break;
  }
}

TEST(Sim, FogChangesHeadingOnItsInterval) {
  LevelConfig l = micro_level(1);
  l.fog.speed = 0.2;
  l.fog.initial_center = Vec2(0, 2);
  GameState s = make_initial_state(l, *catalog(), 5);
  const Vec2 v0 = s.fog.velocity;
  run_ticks(s, l, 249);
  EXPECT_EQ(s.fog.velocity, v0);
  run_ticks(s, l, 1);
  EXPECT_NE(s.fog.velocity, v0);
  EXPECT_NEAR(s.fog.velocity.norm(), 0.2, 1e-12);
}

TEST(Sim, FireZoneInsideFogLiftsObstruction) {
  const LevelConfig l = micro_level(1);
  GameState s = make_initial_state(l, *catalog(), 5);
  s.fog.center = Vec2(0, 0);
  s.fog.width = 1.0;
  s.fog.height = 1.0;
  EXPECT_TRUE(fog_obstructs(s));
  EXPECT_TRUE(fogged(s, Vec2(0.2, 0.2)));
  EXPECT_FALSE(fogged(s, Vec2(0.8, 0.0)));
  s.fire_zones.push_back(FireOfRageZone{Vec2(0.7, 0.0), 100, 0, 0.25});
  EXPECT_FALSE(fog_obstructs(s));
  EXPECT_FALSE(fogged(s, Vec2(0.2, 0.2)));
  s.fire_zones.back().position = Vec2(0.8, 0.0);
  EXPECT_TRUE(fog_obstructs(s));
}

TEST(Sim, FoggedTowerDoesNotAttack) {
  const LevelConfig l = micro_level(1);
  const auto& c = *catalog();
  GameState s = make_initial_state(l, c, 5);
  ASSERT_EQ(execute_action(s, l, c, at(l.tower_points[0].position, ActionType::build_archer)), kOk);
  add_enemy(s, l, 0, Vec2(0.0, 1.5), 1.0);
  s.fog.center = l.tower_points[0].position;
  s.fog.width = 0.3;
  s.fog.height = 0.3;
  s.fog.velocity = Vec2::Zero();
  tick(s, l, c);
  EXPECT_EQ(s.enemies[0].health, 500);
  s.fog.center = Vec2(2.5, 2.5);
  tick(s, l, c);
  EXPECT_LT(s.enemies[0].health, 500);
}

TEST(Sim, TowerTargetsEnemyFurthestAlong) {
  const LevelConfig l = micro_level(1);
  const auto& c = *catalog();
  GameState s = make_initial_state(l, c, 5);
  ASSERT_EQ(execute_action(s, l, c, at(l.tower_points[0].position, ActionType::build_archer)), kOk);
  add_enemy(s, l, 0, Vec2(-0.5, 1.0), 2.5);
  add_enemy(s, l, 0, Vec2(0.5, 1.0), 3.5);
  add_enemy(s, l, 0, Vec2(0.2, 1.0), 3.5);
  add_enemy(s, l, 0, Vec2(2.9, -2.9), 5.9);  // out of range
  tick(s, l, c);
  EXPECT_EQ(s.enemies[0].health, 500);
  EXPECT_LT(s.enemies[1].health, 500);
  EXPECT_EQ(s.enemies[2].health, 500);
  EXPECT_EQ(s.enemies[3].health, 500);
}

TEST(Sim, ArcherDamageWithinStatRange) {
  const LevelConfig l = micro_level(1);
  const auto& c = *catalog();
  GameState s = make_initial_state(l, c, 5);
  execute_action(s, l, c, at(l.tower_points[0].position, ActionType::build_archer));
  add_enemy(s, l, 0, Vec2(0.0, 1.2), 1.0);
  tick(s, l, c);
  const auto dmg = 500 - s.enemies[0].health;
  EXPECT_GE(dmg, 100);
  EXPECT_LE(dmg, 150);
  // next shot after AttackSpeed seconds
  run_ticks(s, l, 39);
  EXPECT_EQ(500 - s.enemies[0].health, dmg);
  tick(s, l, c);
  EXPECT_GT(500 - s.enemies[0].health, dmg);
}

TEST(Sim, MagicianHitsGroundEnemiesInSquare) {
  const LevelConfig l = micro_level(1);
  const auto& c = *catalog();
  GameState s = make_initial_state(l, c, 5);
  execute_action(s, l, c, at(l.tower_points[0].position, ActionType::build_magician));
  add_enemy(s, l, 0, Vec2(0.0, 1.2), 2.0);
  add_enemy(s, l, 0, Vec2(0.35, 1.2), 1.0);   // inside the square
  add_enemy(s, l, 0, Vec2(0.0, 0.9), 1.0);    // 0.3 below, inside
  add_enemy(s, l, 0, Vec2(-0.6, 1.2), 1.5);   // outside
  add_enemy(s, l, 2, Vec2(0.1, 1.2), 1.0);    // flying, never hit
  tick(s, l, c);
  EXPECT_LT(s.enemies[0].health, 500);
  EXPECT_LT(s.enemies[1].health, 500);
  EXPECT_LT(s.enemies[2].health, 500);
  EXPECT_EQ(s.enemies[3].health, 500);
  EXPECT_EQ(s.enemies[4].health, c.enemy(2).health);
}

TEST(Sim, KnightTowerSummonsUpToThree) {
  const LevelConfig l = micro_level(1);
  const auto& c = *catalog();
  GameState s = make_initial_state(l, c, 5);
  execute_action(s, l, c, at(l.tower_points[0].position, ActionType::build_knight));
  tick(s, l, c);
  EXPECT_EQ(live_knights_of_tower(s, 0), 1);
  run_ticks(s, l, 199);
  EXPECT_EQ(live_knights_of_tower(s, 0), 1);
  tick(s, l, c);
  EXPECT_EQ(live_knights_of_tower(s, 0), 2);
  run_ticks(s, l, 600);
  EXPECT_EQ(live_knights_of_tower(s, 0), 3);
  // knights walk to the assembly point
  for (const auto& k : s.knights) EXPECT_NEAR(distance(k.position, knight_home(s, k)), 0.0, 1e-9);
}

TEST(Sim, KnightBlocksAndFightsEnemy) {
  const LevelConfig l = micro_level(1);
  const auto& c = *catalog();
  GameState s = make_initial_state(l, c, 5);
  KnightInstance k;
  k.id = s.next_entity_id++;
  k.tower_index = -1;
  k.position = k.anchor = Vec2(0.0, 0.0);
  k.health = c.knight.health;
  k.expire_remaining = 100000;
  s.knights.push_back(k);
  add_enemy(s, l, 0, Vec2(-0.1, 0.0), 2.9);
  const Vec2 start = s.enemies[0].position;
  run_ticks(s, l, 60);
  if (!s.enemies.empty()) EXPECT_EQ(s.enemies[0].position, start);
  EXPECT_LT(s.knights.empty() ? 0 : s.knights[0].health, c.knight.health);
}

TEST(Sim, FreezerFreezesTowerInRange) {
  const LevelConfig l = micro_level(1);
  const auto& c = *catalog();
  GameState s = make_initial_state(l, c, 5);
  execute_action(s, l, c, at(l.tower_points[0].position, ActionType::build_archer));
  add_enemy(s, l, 1, Vec2(0.0, 1.0), 1.0);
  tick(s, l, c);
  EXPECT_EQ(s.towers[0].frozen_remaining, to_ticks(l.rules.freeze_duration) - 1);
  const auto health = s.enemies[0].health;
  run_ticks(s, l, 10);
  EXPECT_EQ(s.enemies[0].health, health);
}

TEST(Sim, FireOfRageDamagesAndCompensates) {
  const LevelConfig l = micro_level(1);
  const auto& c = *catalog();
  GameState s = make_initial_state(l, c, 5);
  s.hero.position = Vec2(0.0, -1.0);
  KnightInstance k;
  k.id = s.next_entity_id++;
  k.tower_index = -1;
  k.position = k.anchor = Vec2(0.05, -1.0);
  k.health = 50;
  k.expire_remaining = 100000;
  s.knights.push_back(k);
  add_enemy(s, l, 0, Vec2(-0.1, -1.0), 1.0).health = 100000;
  ASSERT_EQ(execute_action(s, l, c, at(Vec2::Zero(), ActionType::fire_of_rage)), kOk);
  EXPECT_EQ(s.hero.health, 1500);
  ASSERT_EQ(s.fire_zones.size(), 1u);
  EXPECT_EQ(s.fire_zones[0].position, Vec2(0.0, -1.0));
  const auto gold = s.gold;
  tick(s, l, c);
  EXPECT_TRUE(s.knights.empty());
  EXPECT_EQ(s.friendly_fire_compensation_count, 1);
  EXPECT_EQ(s.gold, gold + c.knight.ff_compensation_value);
  EXPECT_EQ(s.ledger.compensation, c.knight.ff_compensation_value);
  ASSERT_FALSE(s.enemies.empty());
  EXPECT_LE(s.enemies[0].health, 100000 - c.hero.skill_attack_damage);
  run_ticks(s, l, to_ticks(c.hero.skill_last_time));
  EXPECT_TRUE(s.fire_zones.empty());
}

TEST(Sim, HeroRegeneratesAtConfiguredRate) {
  const LevelConfig l = micro_level(1);
  const auto& c = *catalog();
  GameState s = make_initial_state(l, c, 5);
  s.hero.health = 1000;
  run_ticks(s, l, 50);
  EXPECT_EQ(s.hero.health, 1050);
  run_ticks(s, l, 50 * 20);
  EXPECT_EQ(s.hero.health, 1600);
}

TEST(Sim, HeroRevivesAtSpawnWithFullHealth) {
  const LevelConfig l = micro_level(1);
  const auto& c = *catalog();
  GameState s = make_initial_state(l, c, 5);
  s.hero.health = 100;
  s.hero.position = Vec2(1, 1);
  ASSERT_EQ(execute_action(s, l, c, at(Vec2::Zero(), ActionType::fire_of_rage)), kOk);
  EXPECT_FALSE(s.hero.alive);
  EXPECT_EQ(validate_action(s, l, c, at(Vec2::Zero(), ActionType::move_hero)), kHeroDead);
  run_ticks(s, l, 499);
  EXPECT_FALSE(s.hero.alive);
  tick(s, l, c);
  EXPECT_TRUE(s.hero.alive);
  EXPECT_EQ(s.hero.health, s.hero.max_health);
  EXPECT_EQ(s.hero.position, l.hero_spawn);
}

TEST(Sim, HeroWalksToTarget) {
  const LevelConfig l = micro_level(1);
  const auto& c = *catalog();
  GameState s = make_initial_state(l, c, 5);
  execute_action(s, l, c, at(Vec2(-2.8, -1.9), ActionType::move_hero));
  run_ticks(s, l, 49);
  EXPECT_TRUE(s.hero.move_target.has_value());
  tick(s, l, c);
  EXPECT_NEAR(s.hero.position.y(), -1.9, 1e-9);
  EXPECT_FALSE(s.hero.move_target.has_value());
}

TEST(Sim, GoldDropLifecycle) {
  LevelConfig l = micro_level(1);
  const auto& c = *catalog();
  GameState s = make_initial_state(l, c, 5);
  s.hero.alive = false;  // keep the hero from collecting
  s.hero.revive_remaining = 1 << 30;
  run_ticks(s, l, 99);
  EXPECT_FALSE(s.gold_drop.has_value());
  tick(s, l, c);
  ASSERT_TRUE(s.gold_drop.has_value());
  EXPECT_EQ(s.gold_drop->remaining_lifetime, 15 * 50);
  run_ticks(s, l, 15 * 50);
  EXPECT_FALSE(s.gold_drop.has_value());
  EXPECT_EQ(s.gold_collection_count, 0);
}

TEST(Sim, GoldDropCollectedByHero) {
  LevelConfig l = micro_level(1);
  const auto& c = *catalog();
  GameState s = make_initial_state(l, c, 5);
  run_ticks(s, l, 100);
  ASSERT_TRUE(s.gold_drop.has_value());
  s.hero.position = s.gold_drop->position;
  const auto gold = s.gold;
  tick(s, l, c);
  EXPECT_FALSE(s.gold_drop.has_value());
  EXPECT_EQ(s.gold_collection_count, 1);
  EXPECT_GE(s.gold - gold, l.gold_pickup_min);
  EXPECT_LE(s.gold - gold, l.gold_pickup_max);
}

TEST(Sim, GoldNeverExceedsCap) {
  LevelConfig l = micro_level(1);
  l.initial_gold = 2990;
  GameState s = make_initial_state(l, *catalog(), 5);
  EXPECT_EQ(add_gold(s, 100), 10);
  EXPECT_EQ(s.gold, 3000);
  EXPECT_EQ(s.ledger.discarded, 90);
}

TEST(Sim, UpgradedStatRounds) {
  EXPECT_EQ(upgraded_stat(100, 1.4, 0), 100);
  EXPECT_EQ(upgraded_stat(100, 1.4, 1), 140);
  EXPECT_EQ(upgraded_stat(100, 1.4, 2), 196);
  EXPECT_EQ(upgraded_stat(50, 1.3, 3), 110);
}

TEST(Sim, ReinforcementsExpire) {
  const LevelConfig l = micro_level(1);
  const auto& c = *catalog();
  GameState s = make_initial_state(l, c, 5);
  ASSERT_EQ(execute_action(s, l, c, at(Vec2(1, -1), ActionType::reinforcements)), kOk);
  EXPECT_EQ(s.knights.size(), 2u);
  run_ticks(s, l, 499);
  EXPECT_EQ(s.knights.size(), 2u);
  EXPECT_EQ(validate_action(s, l, c, at(Vec2(1, -1), ActionType::reinforcements)), kReinforcementsCooldown);
  tick(s, l, c);
  EXPECT_TRUE(s.knights.empty());
  EXPECT_EQ(validate_action(s, l, c, at(Vec2(1, -1), ActionType::reinforcements)), kOk);
}

TEST(Sim, SameSeedSameActionsSameState) {
  const auto l = level("Lv5");
  const auto& c = *catalog();
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    GameState a = make_initial_state(*l, c, seed);
    GameState b = make_initial_state(*l, c, seed);
    Rng actions(seed * 31);
    for (int step = 0; step < 300 && !is_terminal(a, *l); ++step) {
      const Action act{actions.uniform(-3, 3), actions.uniform(-3, 3),
                       static_cast<int>(actions.uniform_int(0, 11))};
      EXPECT_EQ(execute_action(a, *l, c, act), execute_action(b, *l, c, act));
      for (int t = 0; t < 16; ++t) {
        tick(a, *l, c);
        tick(b, *l, c);
      }
      ASSERT_TRUE(a == b) << "diverged at step " << step;
    }
  }
}

TEST(SimProperty, GoldLedgerBalances) {
  const auto& c = *catalog();
  for (const auto& name : kBenchmarkLevels) {
    const auto l = level(name);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      GameState s = make_initial_state(*l, c, seed);
      Rng actions(seed + 100);
      while (!is_terminal(s, *l) && s.step_index < 20000) {
        execute_action(s, *l, c,
                       {actions.uniform(-3, 3), actions.uniform(-3, 3), static_cast<int>(actions.uniform_int(0, 11))});
        for (int t = 0; t < 16 && !is_terminal(s, *l); ++t) tick(s, *l, c);
        const auto& g = s.ledger;
        ASSERT_EQ(s.gold, l->initial_gold + g.pickups + g.compensation + g.refunds - g.spent) << name;
        ASSERT_GE(s.gold, 0);
        ASSERT_LE(s.gold, l->max_gold);
        ASSERT_EQ(s.base_health + s.base_health_lost, l->initial_base_health);
        ASSERT_GE(s.hero.health, 0);
        ASSERT_LE(s.hero.health, s.hero.max_health);
        ASSERT_LE(static_cast<int>(s.fire_zones.size()), kMaxFireZones);
        for (const auto& t : s.towers) {
          if (t.type != TowerType::knight) continue;
          ASSERT_LE(live_knights_of_tower(s, t.point_index), 3);
        }
      }
    }
  }
}
