#include "tdenv/action.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tdenv/sim.hpp"

namespace tdenv {
namespace {

TowerType build_type(int c) {
  switch (static_cast<ActionType>(c)) {
    case ActionType::build_archer: return TowerType::archer;
    case ActionType::build_magician: return TowerType::magician;
    default: return TowerType::knight;
  }
}

/// Nearest built knight tower whose range covers p, or -1.
int assembly_owner(const GameState& s, const LevelConfig& level, const EntityCatalog& c,
                   const Vec2& p) {
  const double radius = 0.5 * c.tower(TowerType::knight).attack_range;
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.towers.size(); ++i) {
    if (s.towers[i].type != TowerType::knight) continue;
    const double d = distance(level.tower_points[i].position, p);
    if (d <= radius && d < best_d) {
      best = static_cast<int>(i);
      best_d = d;
    }
  }
  return best;
}

}  // namespace

void check_action(const Action& a) {
  if (!std::isfinite(a.x) || !std::isfinite(a.y))
    throw std::invalid_argument("action coordinates must be finite");
  if (a.c < 0 || a.c >= kActionTypeCount)
    throw std::invalid_argument("action index " + std::to_string(a.c) + " is outside [0, 11]");
}

int tower_point_at(const LevelConfig& level, const Vec2& p) {
  for (std::size_t i = 0; i < level.tower_points.size(); ++i)
    if (in_square(level.tower_points[i].position, kTowerBoxSide, p)) return static_cast<int>(i);
  return -1;
}

int validate_action(const GameState& s, const LevelConfig& level, const EntityCatalog& c,
                    const Action& a) {
  check_action(a);
  const Vec2 p = clamp_to_map(Vec2(a.x, a.y));
  const auto type = static_cast<ActionType>(a.c);
  switch (type) {
    case ActionType::build_archer:
    case ActionType::build_magician:
    case ActionType::build_knight: {
      const int i = tower_point_at(level, p);
      if (i < 0) return kNoTowerPoint;
      if (s.towers[static_cast<std::size_t>(i)].built()) return kBuildOccupied;
      if (s.gold < c.tower(build_type(a.c)).price) return kBuildNoGold;
      return kOk;
    }
    case ActionType::upgrade_tower: {
      const int i = tower_point_at(level, p);
      if (i < 0) return kNoTowerPoint;
      const auto& t = s.towers[static_cast<std::size_t>(i)];
      if (!t.built()) return kUpgradeMissing;
      if (s.gold < c.tower(t.type).upgrade_price) return kUpgradeNoGold;
      return kOk;
    }
    case ActionType::sell_tower:
    case ActionType::show_range: {
      const int i = tower_point_at(level, p);
      if (i < 0) return kNoTowerPoint;
      if (!s.towers[static_cast<std::size_t>(i)].built())
        return type == ActionType::sell_tower ? kSellMissing : kShowRangeMissing;
      return kOk;
    }
    case ActionType::noop:
      return kOk;
    case ActionType::set_assembly:
      return assembly_owner(s, level, c, p) < 0 ? kAssemblyOutOfRange : kOk;
    case ActionType::reinforcements:
      return s.reinforcements_cooldown > 0 ? kReinforcementsCooldown : kOk;
    case ActionType::move_hero:
    case ActionType::fire_of_rage:
      return s.hero.alive ? kOk : kHeroDead;
    case ActionType::upgrade_hero:
      if (!s.hero.alive) return kHeroDead;
      return s.gold < c.hero.upgrade_gold_cost ? kHeroUpgradeNoGold : kOk;
  }
  return kOk;
}

int execute_action(GameState& s, const LevelConfig& level, const EntityCatalog& c,
                   const Action& a) {
  const int code = validate_action(s, level, c, a);
  const Vec2 p = clamp_to_map(Vec2(a.x, a.y));
  s.last_action = ActionRecord{p, a.c, code == kOk, code};
  if (code != kOk) return code;

  switch (static_cast<ActionType>(a.c)) {
    case ActionType::build_archer:
    case ActionType::build_magician:
    case ActionType::build_knight: {
      auto& t = s.towers[static_cast<std::size_t>(tower_point_at(level, p))];
      const auto& spec = c.tower(build_type(a.c));
      t.type = spec.type;
      t.upgrade_level = 0;
      t.invested_gold = spec.price;
      t.attack_cooldown = 0;
      t.frozen_remaining = 0;
      s.gold -= spec.price;
      s.ledger.spent += spec.price;
      break;
    }
    case ActionType::upgrade_tower: {
      auto& t = s.towers[static_cast<std::size_t>(tower_point_at(level, p))];
      const std::int64_t price = c.tower(t.type).upgrade_price;
      ++t.upgrade_level;
      t.invested_gold += price;
      s.gold -= price;
      s.ledger.spent += price;
      break;
    }
    case ActionType::sell_tower: {
      const int i = tower_point_at(level, p);
      auto& t = s.towers[static_cast<std::size_t>(i)];
      const auto refund =
          std::llround(static_cast<double>(t.invested_gold) * level.refund_rate);
      std::erase_if(s.knights, [i](const KnightInstance& k) { return k.tower_index == i; });
      t = TowerInstance{};
      t.point_index = i;
      t.assembly = level.tower_points[static_cast<std::size_t>(i)].assembly;
      if (s.show_range_tower == i) {
        s.show_range_tower = -1;
        s.show_range_remaining = 0;
      }
      s.ledger.refunds += add_gold(s, refund);
      break;
    }
    case ActionType::show_range:
      s.show_range_tower = tower_point_at(level, p);
      s.show_range_remaining = kDefaultActionInterval;
      break;
    case ActionType::noop:
      break;
    case ActionType::set_assembly:
      s.towers[static_cast<std::size_t>(assembly_owner(s, level, c, p))].assembly = p;
      break;
    case ActionType::reinforcements: {
      for (int slot = 0; slot < c.reinforcements.number; ++slot) {
        KnightInstance k;
        k.id = s.next_entity_id++;
        k.tower_index = -1;
        k.slot = slot;
        k.position = p;
        k.anchor = p;
        k.health = c.knight.health;
        k.expire_remaining = to_ticks(c.reinforcements.exist_time);
        s.knights.push_back(k);
      }
      s.reinforcements_cooldown = to_ticks(c.reinforcements.exist_time);
      break;
    }
    case ActionType::move_hero:
      s.hero.move_target = p;
      break;
    case ActionType::fire_of_rage: {
      if (static_cast<int>(s.fire_zones.size()) >= kMaxFireZones)
        s.fire_zones.erase(s.fire_zones.begin());
      s.fire_zones.push_back(FireOfRageZone{s.hero.position, to_ticks(c.hero.skill_last_time), 0,
                                            0.5 * c.hero.skill_attack_range});
      s.hero.health -= c.hero.skill_cost_health;
      if (s.hero.health <= 0) {
        s.hero.health = 0;
        s.hero.alive = false;
        s.hero.revive_remaining = to_ticks(c.hero.revive_time);
        s.hero.move_target.reset();
        s.hero.target = kNoEntity;
        s.hero.regen_carry = 0.0;
      }
      break;
    }
    case ActionType::upgrade_hero:
      s.gold -= c.hero.upgrade_gold_cost;
      s.ledger.spent += c.hero.upgrade_gold_cost;
      s.hero.max_health += c.hero.upgrade_health_growth;
      s.hero.health = std::min(s.hero.max_health, s.hero.health + c.hero.upgrade_health_growth);
      break;
  }
  return code;
}

}  // namespace tdenv
