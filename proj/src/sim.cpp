#include "tdenv/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tdenv {
namespace {

constexpr int kKnightsPerTower = 3;
constexpr int kFogPlacementTries = 32;

// Slot offsets keep knights sharing a rally point from stacking exactly.
const Vec2 kSlotOffsets[kKnightsPerTower] = {Vec2(0.0, 0.0), Vec2(0.12, 0.0), Vec2(-0.12, 0.0)};

double growth_factor(double growth, int level) {
  double f = 1.0;
  for (int i = 0; i < level; ++i) f *= growth;
  return f;
}

bool attackable(MovementType m, bool air, bool ground) {
  return m == MovementType::flying ? air : ground;
}

bool enemy_live(const EnemyInstance& e) { return e.health > 0 && !e.arrived; }

EnemyInstance* find_enemy(GameState& s, EntityId id) {
  if (id == kNoEntity) return nullptr;
  // enemies are appended in id order
  auto it = std::lower_bound(s.enemies.begin(), s.enemies.end(), id,
                             [](const EnemyInstance& e, EntityId v) { return e.id < v; });
  return it != s.enemies.end() && it->id == id ? &*it : nullptr;
}

KnightInstance* find_knight(GameState& s, EntityId id) {
  for (auto& k : s.knights)
    if (k.id == id) return &k;
  return nullptr;
}

/// "First" rule: the live attackable enemy furthest along its road within
/// `radius` of `from`; ties go to the lower id.
EntityId pick_target(const GameState& s, const Vec2& from, double radius, bool air, bool ground) {
  EntityId best = kNoEntity;
  double best_progress = -1.0;
  for (const auto& e : s.enemies) {
    if (!enemy_live(e) || !attackable(e.movement, air, ground)) continue;
    if (distance(from, e.position) > radius) continue;
    if (e.progress > best_progress) {
      best_progress = e.progress;
      best = e.id;
    }
  }
  return best;
}

struct KnightStats {
  std::int64_t damage;
  std::int64_t extra;
  double speed;
};

KnightStats knight_stats(const GameState& s, const EntityCatalog& c, const KnightInstance& k) {
  if (k.reinforcement())
    return {c.knight.attack_damage, c.knight.attack_extra_damage, c.knight.movement_speed};
  const auto& t = s.towers[static_cast<std::size_t>(k.tower_index)];
  const double g = c.tower(TowerType::knight).upgrade_growth;
  return {upgraded_stat(c.knight.attack_damage, g, t.upgrade_level),
          upgraded_stat(c.knight.attack_extra_damage, g, t.upgrade_level),
          c.knight.movement_speed * growth_factor(g, t.upgrade_level)};
}

bool knight_active(const GameState& s, const KnightInstance& k) {
  return k.health > 0 && !fogged(s, k.position);
}

bool hero_active(const GameState& s) { return s.hero.alive && !fogged(s, s.hero.position); }

void kill_hero(GameState& s, const EntityCatalog& c) {
  s.hero.health = 0;
  s.hero.alive = false;
  s.hero.revive_remaining = to_ticks(c.hero.revive_time);
  s.hero.move_target.reset();
  s.hero.target = kNoEntity;
  s.hero.regen_carry = 0.0;
}

void remove_dead(GameState& s) {
  std::erase_if(s.enemies, [](const EnemyInstance& e) { return e.health <= 0; });
  std::erase_if(s.knights, [](const KnightInstance& k) { return k.health <= 0; });
}

// --- phases -----------------------------------------------------------------

void phase_spawn(GameState& s, const LevelConfig& level, const EntityCatalog& c) {
  if (s.waves_spawned < level.total_waves() && s.enemies.empty() && s.spawn_queue.empty()) {
    if (--s.wave_countdown <= 0) spawn_wave(s, level);
  }
  while (!s.spawn_queue.empty() && s.spawn_cooldown <= 0) {
    const SpawnOrder o = s.spawn_queue.front();
    s.spawn_queue.pop_front();
    const auto& spec = c.enemy(o.type);
    EnemyInstance e;
    e.id = s.next_entity_id++;
    e.type = o.type;
    e.health = spec.health;
    e.road = o.road;
    e.position = level.roads[static_cast<std::size_t>(o.road)].front();
    e.waypoint_cursor = 1;
    e.movement = spec.movement;
    s.enemies.push_back(e);
    s.spawn_cooldown = to_ticks(level.rules.spawn_interval);
  }
}

EntityId find_blocker(const GameState& s, const Vec2& p, double radius) {
  EntityId best = kNoEntity;
  double best_d = std::numeric_limits<double>::infinity();
  if (hero_active(s)) {
    const double d = distance(p, s.hero.position);
    if (d <= radius) {
      best = kHeroId;
      best_d = d;
    }
  }
  for (const auto& k : s.knights) {
    if (!knight_active(s, k)) continue;
    const double d = distance(p, k.position);
    if (d <= radius && d < best_d) {
      best = k.id;
      best_d = d;
    }
  }
  return best;
}

void move_enemy(EnemyInstance& e, const std::vector<Vec2>& road, double step) {
  while (step > 0.0 && !e.arrived) {
    const Vec2& wp = road[static_cast<std::size_t>(e.waypoint_cursor)];
    const double d = distance(e.position, wp);
    if (d <= step) {
      e.position = wp;
      e.progress += d;
      step -= d;
      if (++e.waypoint_cursor >= static_cast<int>(road.size())) e.arrived = true;
    } else {
      e.position += (wp - e.position) * (step / d);
      e.progress += step;
      step = 0.0;
    }
  }
}

void phase_move(GameState& s, const LevelConfig& level, const EntityCatalog& c) {
  for (auto& e : s.enemies) {
    if (e.arrived) continue;
    e.blocker = kNoEntity;
    if (e.movement == MovementType::ground) {
      e.blocker = find_blocker(s, e.position, level.rules.enemy_engage_radius);
      if (e.blocker != kNoEntity) continue;
    }
    move_enemy(e, level.roads[static_cast<std::size_t>(e.road)],
               c.enemy(e.type).movement_speed * kTickSeconds);
  }

  for (auto& k : s.knights) {
    const KnightStats st = knight_stats(s, c, k);
    const double step = st.speed * kTickSeconds;
    const EnemyInstance* t = find_enemy(s, k.target);
    if (t && enemy_live(*t)) {
      if (distance(k.position, t->position) > level.rules.knight_contact_radius) {
        const Vec2 delta = t->position - k.position;
        const double d = delta.norm();
        const double advance = std::min(step, d - level.rules.knight_contact_radius);
        k.position += delta * (advance / d);
      }
    } else {
      step_toward(k.position, knight_home(s, k), step);
    }
  }

  if (s.hero.alive && s.hero.move_target) {
    if (step_toward(s.hero.position, *s.hero.move_target, c.hero.movement_speed * kTickSeconds))
      s.hero.move_target.reset();
  }
}

void phase_target(GameState& s, const LevelConfig& level, const EntityCatalog& c) {
  for (auto& t : s.towers) {
    t.target = kNoEntity;
    if (!t.built() || t.type == TowerType::knight || t.frozen_remaining > 0) continue;
    const Vec2& pos = level.tower_points[static_cast<std::size_t>(t.point_index)].position;
    if (fogged(s, pos)) continue;
    const auto& spec = c.tower(t.type);
    t.target = pick_target(s, pos, 0.5 * spec.attack_range, spec.can_attack_air,
                           spec.can_attack_ground);
  }
  for (auto& k : s.knights) {
    k.target = kNoEntity;
    if (!knight_active(s, k)) continue;
    k.target = pick_target(s, k.position, 0.5 * c.knight.attack_range, c.knight.can_attack_air,
                           c.knight.can_attack_ground);
  }
  s.hero.target = kNoEntity;
  if (hero_active(s))
    s.hero.target = pick_target(s, s.hero.position, 0.5 * c.hero.attack_range,
                                c.hero.can_attack_air, c.hero.can_attack_ground);
}

void summon_knight(GameState& s, const LevelConfig& level, const EntityCatalog& c, int tower_index) {
  bool used[kKnightsPerTower] = {false, false, false};
  for (const auto& k : s.knights)
    if (k.tower_index == tower_index) used[k.slot] = true;
  int slot = 0;
  while (slot < kKnightsPerTower && used[slot]) ++slot;
  if (slot == kKnightsPerTower) return;
  KnightInstance k;
  k.id = s.next_entity_id++;
  k.tower_index = tower_index;
  k.slot = slot;
  k.position = level.tower_points[static_cast<std::size_t>(tower_index)].position;
  k.health = c.knight.health;
  s.knights.push_back(k);
}

void damage_blocker(GameState& s, const EntityCatalog& c, EntityId blocker, std::int64_t dmg) {
  if (blocker == kHeroId) {
    if (!s.hero.alive) return;
    s.hero.health -= dmg;
    if (s.hero.health <= 0) kill_hero(s, c);
  } else if (KnightInstance* k = find_knight(s, blocker)) {
    k->health -= dmg;
  }
}

bool blocker_alive(GameState& s, EntityId blocker) {
  if (blocker == kHeroId) return s.hero.alive;
  const KnightInstance* k = find_knight(s, blocker);
  return k && k->health > 0;
}

void phase_attack(GameState& s, const LevelConfig& level, const EntityCatalog& c) {
  for (std::size_t i = 0; i < s.towers.size(); ++i) {
    auto& t = s.towers[i];
    if (!t.built() || t.frozen_remaining > 0 || t.attack_cooldown > 0) continue;
    const Vec2& pos = level.tower_points[i].position;
    if (fogged(s, pos)) continue;
    const auto& spec = c.tower(t.type);
    if (t.type == TowerType::knight) {
      if (live_knights_of_tower(s, static_cast<int>(i)) < kKnightsPerTower) {
        summon_knight(s, level, c, static_cast<int>(i));
        t.attack_cooldown = to_ticks(spec.attack_speed);
      }
      continue;
    }
    EnemyInstance* target = find_enemy(s, t.target);
    if (!target || target->health <= 0) continue;
    const std::int64_t base = upgraded_stat(spec.attack_damage, spec.upgrade_growth, t.upgrade_level);
    const std::int64_t extra =
        upgraded_stat(spec.attack_extra_damage, spec.upgrade_growth, t.upgrade_level);
    if (t.type == TowerType::magician) {
      // blade trap: a 0.8 square on the ground around the target
      const Vec2 centre = target->position;
      for (auto& e : s.enemies) {
        if (!enemy_live(e) || e.movement != MovementType::ground) continue;
        if (!in_square(centre, 0.8, e.position)) continue;
        e.health -= resolve_attack(base, extra, s.rng);
      }
    } else {
      target->health -= resolve_attack(base, extra, s.rng);
    }
    t.attack_cooldown = to_ticks(spec.attack_speed);
  }

  for (auto& k : s.knights) {
    if (!knight_active(s, k) || k.attack_cooldown > 0) continue;
    EnemyInstance* target = find_enemy(s, k.target);
    if (!target || target->health <= 0) continue;
    if (distance(k.position, target->position) > 0.5 * c.knight.attack_range) continue;
    const KnightStats st = knight_stats(s, c, k);
    target->health -= resolve_attack(st.damage, st.extra, s.rng);
    k.attack_cooldown = to_ticks(c.knight.attack_speed);
  }

  if (hero_active(s) && s.hero.attack_cooldown <= 0) {
    EnemyInstance* target = find_enemy(s, s.hero.target);
    if (target && target->health > 0) {
      target->health -= resolve_attack(c.hero.attack_damage, c.hero.attack_extra_damage, s.rng);
      s.hero.attack_cooldown = to_ticks(c.hero.attack_speed);
    }
  }

  const Ticks freeze_ticks = to_ticks(level.rules.freeze_duration);
  for (auto& e : s.enemies) {
    if (!enemy_live(e) || e.attack_cooldown > 0 || e.movement == MovementType::flying) continue;
    const auto& spec = c.enemy(e.type);
    if (spec.freezes_towers) {
      int victim = -1;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < s.towers.size(); ++i) {
        const auto& t = s.towers[i];
        if (!t.built() || t.frozen_remaining > 0) continue;
        const double d = distance(level.tower_points[i].position, e.position);
        if (d <= 0.5 * c.tower(t.type).attack_range && d < best) {
          best = d;
          victim = static_cast<int>(i);
        }
      }
      if (victim >= 0) {
        s.towers[static_cast<std::size_t>(victim)].frozen_remaining = freeze_ticks;
        s.towers[static_cast<std::size_t>(victim)].target = kNoEntity;
        e.attack_cooldown = to_ticks(spec.attack_speed);
        continue;
      }
    }
    if (e.blocker == kNoEntity || !blocker_alive(s, e.blocker)) continue;
    damage_blocker(s, c, e.blocker, resolve_attack(spec.attack_damage, spec.attack_extra_damage, s.rng));
    e.attack_cooldown = to_ticks(spec.attack_speed);
  }

  remove_dead(s);
}

void phase_zones(GameState& s, const LevelConfig& level, const EntityCatalog& c) {
  int knights_killed = 0;
  const Ticks pulse = to_ticks(level.rules.fire_pulse_interval);
  for (auto& z : s.fire_zones) {
    if (z.pulse_countdown <= 0) {
      for (auto& e : s.enemies) {
        if (!enemy_live(e) || e.movement != MovementType::ground) continue;
        if (distance(z.position, e.position) > z.radius) continue;
        e.health -= resolve_attack(c.hero.skill_attack_damage, c.hero.skill_attack_extra_damage, s.rng);
      }
      for (auto& k : s.knights) {
        if (k.health <= 0 || distance(z.position, k.position) > z.radius) continue;
        k.health -= resolve_attack(c.hero.skill_attack_damage, c.hero.skill_attack_extra_damage, s.rng);
        if (k.health <= 0) ++knights_killed;
      }
      z.pulse_countdown = pulse;
    }
    --z.pulse_countdown;
    --z.remaining;
  }
  std::erase_if(s.fire_zones, [](const FireOfRageZone& z) { return z.remaining <= 0; });
  remove_dead(s);
  apply_friendly_fire(s, knights_killed, c);
}

void phase_hero(GameState& s, const LevelConfig& level, const EntityCatalog& c) {
  auto& h = s.hero;
  if (h.alive) {
    if (h.health < h.max_health) {
      h.regen_carry += c.hero.recover_health_per_sec * kTickSeconds;
      const double whole = std::floor(h.regen_carry);
      h.regen_carry -= whole;
      h.health = std::min(h.max_health, h.health + static_cast<std::int64_t>(whole));
    } else {
      h.regen_carry = 0.0;
    }
  } else if (--h.revive_remaining <= 0) {
    h.alive = true;
    h.revive_remaining = to_ticks(c.hero.revive_time);
    h.health = h.max_health;
    h.position = level.hero_spawn;
    h.attack_cooldown = 0;
  }
}

/// Uniform direction without trig, so headings are bit-identical everywhere.
Vec2 random_heading(Rng& rng) {
  for (;;) {
    const Vec2 v(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    const double n2 = v.squaredNorm();
    if (n2 > 1e-6 && n2 <= 1.0) return v / std::sqrt(n2);
  }
}

void phase_fog(GameState& s, const LevelConfig& level) {
  auto& f = s.fog;
  if (--f.redirect_countdown <= 0) {
    f.velocity = random_heading(s.rng) * level.fog.speed;
    f.redirect_countdown = to_ticks(level.fog.redirect_interval);
  }
  f.center += f.velocity * kTickSeconds;
  for (int axis = 0; axis < 2; ++axis) {
    if (f.center[axis] > kMapHalfExtent) {
      f.center[axis] = 2.0 * kMapHalfExtent - f.center[axis];
      f.velocity[axis] = -f.velocity[axis];
    } else if (f.center[axis] < -kMapHalfExtent) {
      f.center[axis] = -2.0 * kMapHalfExtent - f.center[axis];
      f.velocity[axis] = -f.velocity[axis];
    }
  }
}

void dec(Ticks& t) {
  if (t > 0) --t;
}

void phase_cooldowns(GameState& s) {
  for (auto& t : s.towers) {
    dec(t.attack_cooldown);
    dec(t.frozen_remaining);
  }
  for (auto& k : s.knights) {
    dec(k.attack_cooldown);
    if (k.reinforcement()) --k.expire_remaining;
  }
  std::erase_if(s.knights,
                [](const KnightInstance& k) { return k.reinforcement() && k.expire_remaining <= 0; });
  dec(s.hero.attack_cooldown);
  for (auto& e : s.enemies) dec(e.attack_cooldown);
  dec(s.reinforcements_cooldown);
  dec(s.spawn_cooldown);
  if (s.show_range_remaining > 0 && --s.show_range_remaining == 0) s.show_range_tower = -1;
}

void phase_base_hits(GameState& s) {
  for (const auto& e : s.enemies) {
    if (!e.arrived) continue;
    ++s.enemies_reached_base;
    if (s.base_health > 0) {
      --s.base_health;
      ++s.base_health_lost;
    }
  }
  std::erase_if(s.enemies, [](const EnemyInstance& e) { return e.arrived; });
}

}  // namespace

std::int64_t upgraded_stat(std::int64_t base, double growth, int level) {
  if (level == 0) return base;
  return std::llround(static_cast<double>(base) * growth_factor(growth, level));
}

int live_knights_of_tower(const GameState& s, int tower_index) {
  int n = 0;
  for (const auto& k : s.knights)
    if (k.tower_index == tower_index && k.health > 0) ++n;
  return n;
}

Vec2 knight_home(const GameState& s, const KnightInstance& k) {
  const Vec2 base = k.reinforcement() ? k.anchor : s.towers[static_cast<std::size_t>(k.tower_index)].assembly;
  return clamp_to_map(base + kSlotOffsets[k.slot % kKnightsPerTower]);
}

bool fog_obstructs(const GameState& s) {
  for (const auto& z : s.fire_zones)
    if (disc_overlaps_rect(s.fog.center, s.fog.width, s.fog.height, z.position, z.radius))
      return false;
  return true;
}

bool fogged(const GameState& s, const Vec2& p) {
  return in_rect(s.fog.center, s.fog.width, s.fog.height, p) && fog_obstructs(s);
}

std::int64_t resolve_attack(std::int64_t base_damage, std::int64_t extra_damage, Rng& rng) {
  return base_damage + rng.uniform_int(0, extra_damage);
}

std::int64_t add_gold(GameState& s, std::int64_t amount) {
  const std::int64_t kept = std::clamp<std::int64_t>(s.max_gold - s.gold, 0, amount);
  s.gold += kept;
  s.ledger.discarded += amount - kept;
  return kept;
}

void spawn_wave(GameState& s, const LevelConfig& level) {
  if (s.waves_spawned >= level.total_waves()) return;
  const auto& wave = level.waves[static_cast<std::size_t>(s.waves_spawned)];
  const auto roads = static_cast<std::int64_t>(level.roads.size());
  for (int type = 0; type < kEnemyTypeCount; ++type)
    for (int n = 0; n < wave[static_cast<std::size_t>(type)]; ++n)
      s.spawn_queue.push_back({type, static_cast<int>(s.rng.uniform_int(0, roads - 1))});
  ++s.waves_spawned;
  s.wave_index = std::min(s.waves_spawned + 1, level.total_waves());
  s.wave_countdown = to_ticks(level.inter_wave_interval);
}

void apply_friendly_fire(GameState& s, int killed, const EntityCatalog& c) {
  for (int i = 0; i < killed; ++i) {
    if (!s.rng.bernoulli(c.knight.ff_compensation_probability)) continue;
    s.ledger.compensation += add_gold(s, c.knight.ff_compensation_value);
    ++s.friendly_fire_compensation_count;
  }
}

void update_gold(GameState& s, const LevelConfig& level) {
  if (s.gold_drop) {
    auto& d = *s.gold_drop;
    bool collected = s.hero.alive && distance(s.hero.position, d.position) <= level.rules.pickup_radius;
    for (const auto& k : s.knights)
      collected = collected || (k.health > 0 && distance(k.position, d.position) <= level.rules.pickup_radius);
    if (collected) {
      s.ledger.pickups += add_gold(s, s.rng.uniform_int(d.min_pickup, d.max_pickup));
      ++s.gold_collection_count;
      s.gold_drop.reset();
    } else if (--d.remaining_lifetime <= 0) {
      s.gold_drop.reset();
    }
    if (!s.gold_drop) s.gold_refresh_countdown = level.gold_refresh_interval * kTicksPerSecond;
    return;
  }
  if (--s.gold_refresh_countdown > 0) return;
  Vec2 p = Vec2::Zero();
  for (int attempt = 0; attempt < kFogPlacementTries; ++attempt) {
    p = Vec2(s.rng.uniform(-kMapHalfExtent, kMapHalfExtent), s.rng.uniform(-kMapHalfExtent, kMapHalfExtent));
    if (!fogged(s, p)) break;
  }
  s.gold_drop = GoldDrop{p, level.gold_retention_time * kTicksPerSecond, level.gold_pickup_min,
                         level.gold_pickup_max};
}

GameState make_initial_state(const LevelConfig& level, const EntityCatalog& c, std::uint64_t seed) {
  GameState s;
  s.rng.reseed(seed);
  s.gold = level.initial_gold;
  s.max_gold = level.max_gold;
  s.base_health = level.initial_base_health;
  s.wave_index = 1;
  s.wave_countdown = to_ticks(level.inter_wave_interval);
  s.towers.resize(level.tower_points.size());
  for (std::size_t i = 0; i < s.towers.size(); ++i) {
    s.towers[i].point_index = static_cast<int>(i);
    s.towers[i].assembly = level.tower_points[i].assembly;
  }
  s.hero.position = level.hero_spawn;
  s.hero.health = s.hero.max_health = c.hero.health;
  s.hero.revive_remaining = to_ticks(c.hero.revive_time);
  s.gold_refresh_countdown = level.gold_refresh_interval * kTicksPerSecond;
  s.fog.center = level.fog.initial_center;
  s.fog.width = level.fog.width;
  s.fog.height = level.fog.height;
  s.fog.velocity = random_heading(s.rng) * level.fog.speed;
  s.fog.redirect_countdown = to_ticks(level.fog.redirect_interval);
  return s;
}

void tick(GameState& s, const LevelConfig& level, const EntityCatalog& c) {
  phase_spawn(s, level, c);
  phase_move(s, level, c);
  phase_target(s, level, c);
  phase_attack(s, level, c);
  phase_zones(s, level, c);
  update_gold(s, level);
  phase_hero(s, level, c);
  phase_fog(s, level);
  phase_cooldowns(s);
  phase_base_hits(s);
  ++s.step_index;
}

bool is_terminal(const GameState& s, const LevelConfig& level) {
  if (s.base_health <= 0) return true;
  return s.waves_spawned >= level.total_waves() && s.spawn_queue.empty() && s.enemies.empty();
}

}  // namespace tdenv
