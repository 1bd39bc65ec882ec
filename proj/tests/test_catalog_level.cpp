#include <gtest/gtest.h>

#include <fstream>

#include <json.hpp>

#include "tdenv/errors.hpp"
#include "test_util.hpp"

using namespace tdenv;
using tdenv::testing::catalog;
using tdenv::testing::config_dir;
using tdenv::testing::level;
using tdenv::testing::micro_level;

namespace {

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string catalog_file(const char* name) { return read(config_dir() / "catalog" / name); }

EntityCatalog parse_with(const char* which, const std::string& replacement) {
  auto pick = [&](const char* name) {
    return std::string(name) == which ? replacement : catalog_file(name);
  };
  return parse_catalog(pick("towers.json"), pick("knight.json"), pick("hero.json"),
                       pick("reinforcements.json"), pick("enemies.json"));
}

}  // namespace

TEST(Catalog, TowerTable) {
  const auto& c = *catalog();
  const auto& archer = c.tower(TowerType::archer);
  EXPECT_EQ(archer.name, "Archer Tower");
  EXPECT_EQ(archer.price, 120);
  EXPECT_EQ(archer.attack_damage, 100);
  EXPECT_EQ(archer.attack_extra_damage, 50);
  EXPECT_DOUBLE_EQ(archer.attack_range, 3.0);
  EXPECT_TRUE(archer.can_attack_air);
  EXPECT_EQ(c.tower(TowerType::knight).price, 100);
  EXPECT_EQ(c.tower(TowerType::magician).price, 110);
  EXPECT_FALSE(c.tower(TowerType::magician).can_attack_air);
}

TEST(Catalog, EnemyTable) {
  const auto& c = *catalog();
  EXPECT_EQ(c.enemy(0).name, "Orc Warrior");
  EXPECT_EQ(c.enemy(0).health, 500);
  EXPECT_DOUBLE_EQ(c.enemy(0).movement_speed, 0.5);
  EXPECT_EQ(c.enemy(2).movement, MovementType::flying);
  EXPECT_TRUE(c.enemy(1).freezes_towers);
  for (int t = 0; t < kEnemyTypeCount; ++t) EXPECT_EQ(c.enemy(t).type, t);
}

TEST(Catalog, HeroKnightReinforcements) {
  const auto& c = *catalog();
  EXPECT_EQ(c.hero.health, 1600);
  EXPECT_EQ(c.hero.skill_cost_health, 100);
  EXPECT_EQ(c.hero.upgrade_gold_cost, 500);
  EXPECT_DOUBLE_EQ(c.hero.revive_time, 10.0);
  EXPECT_EQ(c.reinforcements.number, 2);
  EXPECT_GT(c.knight.health, 0);
  EXPECT_FALSE(c.towers_json.empty());
  EXPECT_EQ(c.towers_json.find("schema_version"), std::string::npos);
}

TEST(Catalog, RejectsDuplicateTowerType) {
  auto doc = nlohmann::ordered_json::parse(catalog_file("towers.json"));
  doc["Towers"][1]["Type"] = 1;
  EXPECT_THROW(parse_with("towers.json", doc.dump()), ConfigError);
}

TEST(Catalog, RejectsUnknownMovementType) {
  auto doc = nlohmann::ordered_json::parse(catalog_file("enemies.json"));
  doc["Enemies"][0]["MovementType"] = "Burrowing";
  EXPECT_THROW(parse_with("enemies.json", doc.dump()), ConfigError);
}

TEST(Catalog, RejectsBadSchemaVersion) {
  auto doc = nlohmann::ordered_json::parse(catalog_file("hero.json"));
  doc["schema_version"] = 2;
  EXPECT_THROW(parse_with("hero.json", doc.dump()), ConfigError);
}

TEST(Catalog, RejectsMalformedJson) {
  EXPECT_THROW(parse_with("knight.json", "{ not json"), ConfigError);
}

TEST(Level, BundledLevelsLoad) {
  const std::pair<const char*, std::size_t> roads[] = {{"Lv1", 1}, {"Lv2", 1}, {"Lv3", 3}, {"Lv4", 3}, {"Lv5", 4}};
  for (const auto& [name, r] : roads) {
    const auto l = level(name);
    EXPECT_EQ(l->name, name);
    EXPECT_EQ(l->roads.size(), r) << name;
    EXPECT_LE(l->tower_points.size(), std::size_t(kMaxTowerPoints));
    for (const auto& road : l->roads) EXPECT_EQ(road.back(), l->destination);
  }
}

TEST(Level, ResolvesNamesAndPaths) {
  EXPECT_EQ(resolve_level_path("Lv2", config_dir()), config_dir() / "levels" / "lv2.json");
  EXPECT_EQ(resolve_level_path("/tmp/x.json", config_dir()), std::filesystem::path("/tmp/x.json"));
}

TEST(Level, JsonRoundTrip) {
  for (const char* name : {"Lv1", "Lv3", "Lv5"}) {
    const auto l = level(name);
    const std::string doc = level_to_json(*l);
    const LevelConfig back = parse_level(doc);
    EXPECT_EQ(level_to_json(back), doc) << name;
    EXPECT_EQ(back.waves, l->waves);
    EXPECT_EQ(back.rules, l->rules);
  }
}

TEST(Level, ValidationNamesViolation) {
  auto expect_violation = [](LevelConfig l, const std::string& needle) {
    try {
      validate_level(l);
      ADD_FAILURE() << "expected violation: " << needle;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  LevelConfig l = micro_level();
  l.roads.assign(6, l.roads[0]);
  expect_violation(l, "road count");

  l = micro_level();
  l.roads[0].assign(21, Vec2(0, 0));
  l.roads[0].back() = l.destination;
  expect_violation(l, "waypoints");

  l = micro_level();
  l.tower_points.assign(16, l.tower_points[0]);
  for (int i = 0; i < 16; ++i) l.tower_points[i].position = Vec2(-2.5 + 0.3 * (i % 8), 1.0 + 0.6 * (i / 8));
  expect_violation(l, "tower point count");

  l = micro_level();
  l.waves[0][0] = 26;
  expect_violation(l, "wave 1");

  l = micro_level();
  l.waves[0] = {};
  expect_violation(l, "empty");

  l = micro_level();
  l.tower_points[0].position = Vec2(3.5, 0);
  expect_violation(l, "tower point");

  l = micro_level();
  l.roads[0].back() = Vec2(2.0, 0.0);
  expect_violation(l, "destination");

  l = micro_level();
  l.initial_gold = 4000;
  expect_violation(l, "initial_gold");

  l = micro_level();
  l.refund_rate = 1.5;
  expect_violation(l, "refund_rate");
}

TEST(Level, ParseRejectsMissingKeys) {
  auto doc = nlohmann::ordered_json::parse(level_to_json(*level("Lv1")));
  doc.erase("initial_gold");
  EXPECT_THROW(parse_level(doc.dump()), ConfigError);
  EXPECT_THROW(parse_level("[]"), ConfigError);
}
