#include "tdenv/catalog.hpp"

#include "detail/json_util.hpp"

namespace tdenv {
namespace {

using detail::get;
using detail::ojson;

std::string strip_schema(ojson doc) {
  doc.erase("schema_version");
  return doc.dump();
}

void require_non_negative(double v, const std::string& what) {
  if (!(v >= 0.0)) throw ConfigError(what + " must be non-negative");
}

TowerSpec parse_tower(const ojson& j) {
  const std::string w = "towers";
  TowerSpec t;
  const int type = get<int>(j, "Type", w);
  if (type < 1 || type > kTowerTypeCount) throw ConfigError("towers: Type out of range");
  t.type = static_cast<TowerType>(type);
  t.name = get<std::string>(j, "Name", w);
  t.price = get<std::int64_t>(j, "Price", w);
  t.attack_speed = get<double>(j, "AttackSpeed", w);
  t.attack_damage = get<std::int64_t>(j, "AttackDamage", w);
  t.attack_extra_damage = get<std::int64_t>(j, "AttackExtraDamage", w);
  t.attack_range = get<double>(j, "AttackRange", w);
  t.can_attack_air = get<bool>(j, "CanAttackAir", w);
  t.can_attack_ground = get<bool>(j, "CanAttackGround", w);
  t.upgrade_price = get<std::int64_t>(j, "UpgradePrice", w);
  t.upgrade_growth = get<double>(j, "UpgradeGrowth", w);
  t.description = detail::get_or<std::string>(j, "Description", "", w);
  for (double v : {double(t.price), t.attack_speed, double(t.attack_damage),
                   double(t.attack_extra_damage), t.attack_range, double(t.upgrade_price),
                   t.upgrade_growth})
    require_non_negative(v, "towers: " + t.name + " stat");
  return t;
}

EnemySpec parse_enemy(const ojson& j) {
  const std::string w = "enemies";
  EnemySpec e;
  e.type = get<int>(j, "Type", w);
  e.file_path = detail::get_or<std::string>(j, "FilePath", "", w);
  e.health = get<std::int64_t>(j, "Health", w);
  e.movement_speed = get<double>(j, "MovementSpeed", w);
  e.attack_speed = get<double>(j, "AttackSpeed", w);
  e.attack_damage = get<std::int64_t>(j, "AttackDamage", w);
  e.attack_extra_damage = get<std::int64_t>(j, "AttackExtraDamage", w);
  e.name = get<std::string>(j, "Name", w);
  const auto mt = get<std::string>(j, "MovementType", w);
  if (mt == "Ground")
    e.movement = MovementType::ground;
  else if (mt == "Flying")
    e.movement = MovementType::flying;
  else
    throw ConfigError("enemies: unknown MovementType '" + mt + "'");
  e.description = detail::get_or<std::string>(j, "Description", "", w);
  // The tables carry no ability flag; the two casters are identified by type.
  e.freezes_towers = (e.type == 1 || e.type == 7);
  for (double v : {double(e.health), e.movement_speed, e.attack_speed, double(e.attack_damage),
                   double(e.attack_extra_damage)})
    require_non_negative(v, "enemies: " + e.name + " stat");
  return e;
}

}  // namespace

EntityCatalog parse_catalog(const std::string& towers_text, const std::string& knight_text,
                            const std::string& hero_text, const std::string& reinf_text,
                            const std::string& enemies_text) {
  EntityCatalog c;

  const auto towers = detail::parse_document(towers_text, "towers");
  detail::check_schema_version(towers, "towers");
  const auto& tlist = detail::require(towers, "Towers", "towers");
  if (!tlist.is_array() || tlist.size() != kTowerTypeCount)
    throw ConfigError("towers: expected exactly 3 tower types");
  std::array<bool, kTowerTypeCount> seen{};
  for (const auto& tj : tlist) {
    TowerSpec t = parse_tower(tj);
    const int idx = static_cast<int>(t.type) - 1;
    if (seen[idx]) throw ConfigError("towers: duplicate Type");
    seen[idx] = true;
    c.towers[idx] = std::move(t);
  }
  c.towers_json = strip_schema(towers);

  const auto knight = detail::parse_document(knight_text, "knight");
  detail::check_schema_version(knight, "knight");
  {
    const std::string w = "knight";
    auto& k = c.knight;
    k.file_path = detail::get_or<std::string>(knight, "FilePath", "", w);
    k.health = get<std::int64_t>(knight, "Health", w);
    k.movement_speed = get<double>(knight, "MovementSpeed", w);
    k.attack_speed = get<double>(knight, "AttackSpeed", w);
    k.attack_damage = get<std::int64_t>(knight, "AttackDamage", w);
    k.attack_extra_damage = get<std::int64_t>(knight, "AttackExtraDamage", w);
    k.attack_range = get<double>(knight, "AttackRange", w);
    k.can_attack_air = get<bool>(knight, "CanAttackAir", w);
    k.can_attack_ground = get<bool>(knight, "CanAttackGround", w);
    k.ff_compensation_value = get<std::int64_t>(knight, "FFCompensationValue", w);
    k.ff_compensation_probability = get<double>(knight, "FFCompensationProbability", w);
    k.description = detail::get_or<std::string>(knight, "Description", "", w);
    if (k.ff_compensation_probability < 0.0 || k.ff_compensation_probability > 1.0)
      throw ConfigError("knight: FFCompensationProbability must lie in [0, 1]");
    for (double v : {double(k.health), k.movement_speed, k.attack_speed, double(k.attack_damage),
                     double(k.attack_extra_damage), k.attack_range,
                     double(k.ff_compensation_value)})
      require_non_negative(v, "knight stat");
  }
  c.knight_json = strip_schema(knight);

  const auto hero = detail::parse_document(hero_text, "hero");
  detail::check_schema_version(hero, "hero");
  {
    const std::string w = "hero";
    auto& h = c.hero;
    h.file_path = detail::get_or<std::string>(hero, "FilePath", "", w);
    h.health = get<std::int64_t>(hero, "Health", w);
    h.movement_speed = get<double>(hero, "MovementSpeed", w);
    h.attack_speed = get<double>(hero, "AttackSpeed", w);
    h.attack_damage = get<std::int64_t>(hero, "AttackDamage", w);
    h.attack_extra_damage = get<std::int64_t>(hero, "AttackExtraDamage", w);
    h.attack_range = get<double>(hero, "AttackRange", w);
    h.skill_attack_damage = get<std::int64_t>(hero, "SkillAttackDamage", w);
    h.skill_attack_extra_damage = get<std::int64_t>(hero, "SkillAttackExtraDamage", w);
    h.skill_cost_health = get<std::int64_t>(hero, "SkillCostHealth", w);
    h.skill_last_time = get<double>(hero, "SkillLastTime", w);
    h.skill_attack_range = get<double>(hero, "SkillAttackRange", w);
    h.upgrade_gold_cost = get<std::int64_t>(hero, "UpgradeGoldCoinCost", w);
    h.upgrade_health_growth = get<std::int64_t>(hero, "UpgradeHealthGrowthValue", w);
    h.recover_health_per_sec = get<double>(hero, "RecoverHealthPerSec", w);
    h.revive_time = get<double>(hero, "ReviveTime", w);
    h.can_attack_air = get<bool>(hero, "CanAttackAir", w);
    h.can_attack_ground = get<bool>(hero, "CanAttackGround", w);
    h.description = detail::get_or<std::string>(hero, "Description", "", w);
    h.skill_description = detail::get_or<std::string>(hero, "SkillDescription", "", w);
    for (double v : {double(h.health), h.movement_speed, h.attack_speed, double(h.attack_damage),
                     double(h.attack_extra_damage), h.attack_range, double(h.skill_attack_damage),
                     double(h.skill_attack_extra_damage), double(h.skill_cost_health),
                     h.skill_last_time, h.skill_attack_range, double(h.upgrade_gold_cost),
                     double(h.upgrade_health_growth), h.recover_health_per_sec, h.revive_time})
      require_non_negative(v, "hero stat");
  }
  c.hero_json = strip_schema(hero);

  const auto reinf = detail::parse_document(reinf_text, "reinforcements");
  detail::check_schema_version(reinf, "reinforcements");
  c.reinforcements.number = get<int>(reinf, "Number", "reinforcements");
  c.reinforcements.exist_time = get<double>(reinf, "ExistTime", "reinforcements");
  c.reinforcements.description =
      detail::get_or<std::string>(reinf, "Description", "", "reinforcements");
  if (c.reinforcements.number < 0 || c.reinforcements.exist_time < 0.0)
    throw ConfigError("reinforcements: stats must be non-negative");
  c.reinforcements_json = strip_schema(reinf);

  const auto enemies = detail::parse_document(enemies_text, "enemies");
  detail::check_schema_version(enemies, "enemies");
  const auto& elist = detail::require(enemies, "Enemies", "enemies");
  if (!elist.is_array() || elist.size() != kEnemyTypeCount)
    throw ConfigError("enemies: expected exactly 15 enemy types");
  std::array<bool, kEnemyTypeCount> eseen{};
  for (const auto& ej : elist) {
    EnemySpec e = parse_enemy(ej);
    if (e.type < 0 || e.type >= kEnemyTypeCount) throw ConfigError("enemies: Type out of range");
    if (eseen[e.type]) throw ConfigError("enemies: duplicate Type");
    eseen[e.type] = true;
    c.enemies[e.type] = std::move(e);
  }
  c.enemies_json = strip_schema(enemies);
  return c;
}

EntityCatalog load_catalog(const std::filesystem::path& dir) {
  return parse_catalog(detail::read_text_file(dir / "towers.json"),
                       detail::read_text_file(dir / "knight.json"),
                       detail::read_text_file(dir / "hero.json"),
                       detail::read_text_file(dir / "reinforcements.json"),
                       detail::read_text_file(dir / "enemies.json"));
}

}  // namespace tdenv
