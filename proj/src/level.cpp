#include "tdenv/level.hpp"

#include <cstdlib>

#include "detail/json_util.hpp"

namespace tdenv {
namespace {

using detail::get;
using detail::get_or;
using detail::ojson;

void fail(const std::string& msg) { throw ConfigError("level: " + msg); }

void check_in_map(const Vec2& p, const std::string& what) {
  if (!std::isfinite(p.x()) || !std::isfinite(p.y()) || !in_map(p))
    fail(what + " (" + std::to_string(p.x()) + ", " + std::to_string(p.y()) +
         ") lies outside the map [-3, 3]^2");
}

}  // namespace

void validate_level(const LevelConfig& l) {
  if (l.roads.empty()) fail("at least one road is required");
  if (static_cast<int>(l.roads.size()) > kMaxRoads)
    fail("road count " + std::to_string(l.roads.size()) + " exceeds capacity " +
         std::to_string(kMaxRoads));
  check_in_map(l.destination, "destination");
  for (std::size_t r = 0; r < l.roads.size(); ++r) {
    const auto& road = l.roads[r];
    const std::string tag = "road " + std::to_string(r);
    if (road.size() < 2) fail(tag + " needs at least 2 waypoints");
    if (static_cast<int>(road.size()) > kMaxWaypointsPerRoad)
      fail(tag + " has " + std::to_string(road.size()) + " waypoints, capacity is " +
           std::to_string(kMaxWaypointsPerRoad));
    for (const auto& w : road) check_in_map(w, tag + " waypoint");
    if ((road.back() - l.destination).norm() > 1e-9) fail(tag + " does not end at the destination");
  }

  if (l.tower_points.empty()) fail("at least one tower point is required");
  if (static_cast<int>(l.tower_points.size()) > kMaxTowerPoints)
    fail("tower point count " + std::to_string(l.tower_points.size()) + " exceeds capacity " +
         std::to_string(kMaxTowerPoints));
  for (std::size_t i = 0; i < l.tower_points.size(); ++i) {
    const auto& tp = l.tower_points[i];
    check_in_map(tp.position, "tower point " + std::to_string(i));
    check_in_map(tp.assembly, "tower point " + std::to_string(i) + " assembly");
    for (std::size_t j = 0; j < i; ++j) {
      const Vec2 d = (tp.position - l.tower_points[j].position).cwiseAbs();
      if (d.maxCoeff() <= kTowerBoxSide)
        fail("tower points " + std::to_string(j) + " and " + std::to_string(i) +
             " have overlapping bounding boxes");
    }
  }

  if (l.waves.empty()) fail("at least one wave is required");
  for (std::size_t w = 0; w < l.waves.size(); ++w) {
    int total = 0;
    for (int c : l.waves[w]) {
      if (c < 0) fail("wave " + std::to_string(w + 1) + " has a negative count");
      total += c;
    }
    if (total == 0) fail("wave " + std::to_string(w + 1) + " is empty");
    if (total > kMaxEnemiesPerWave)
      fail("wave " + std::to_string(w + 1) + " has " + std::to_string(total) +
           " enemies, capacity is " + std::to_string(kMaxEnemiesPerWave));
  }

  if (!(l.inter_wave_interval > 0.0)) fail("inter_wave_interval must be positive");
  if (l.max_gold <= 0) fail("max_gold must be positive");
  if (l.initial_gold < 0 || l.initial_gold > l.max_gold)
    fail("initial_gold must lie in [0, max_gold]");
  if (l.initial_base_health < 1) fail("initial_base_health must be at least 1");
  if (!(l.refund_rate >= 0.0 && l.refund_rate <= 1.0)) fail("refund_rate must lie in [0, 1]");
  if (l.gold_refresh_interval < 1) fail("gold_refresh_interval must be at least 1 s");
  if (l.gold_retention_time < 1) fail("gold_retention_time must be at least 1 s");
  if (l.gold_pickup_min < 0 || l.gold_pickup_max < l.gold_pickup_min)
    fail("gold pickup range must satisfy 0 <= min <= max");
  if (!(l.fog.width > 0.0 && l.fog.height > 0.0)) fail("fog extent must be positive");
  if (!(l.fog.speed >= 0.0) || !(l.fog.redirect_interval > 0.0)) fail("fog motion is invalid");
  check_in_map(l.fog.initial_center, "fog center");
  check_in_map(l.hero_spawn, "hero spawn");
  const auto& k = l.rules;
  if (!(k.freeze_duration >= 0.0 && k.pickup_radius >= 0.0 && k.spawn_interval >= 0.0 &&
        k.enemy_engage_radius >= 0.0 && k.knight_contact_radius >= 0.0 &&
        k.fire_pulse_interval > 0.0))
    fail("rules contain a negative value");
}

LevelConfig parse_level(const std::string& text) {
  const std::string w = "level";
  const ojson doc = detail::parse_document(text, w);
  detail::check_schema_version(doc, w);
  LevelConfig l;
  l.name = get_or<std::string>(doc, "name", "", w);
  for (const auto& road : detail::require(doc, "roads", w)) {
    std::vector<Vec2> pts;
    for (const auto& p : road) pts.push_back(detail::get_point(p, "level road"));
    l.roads.push_back(std::move(pts));
  }
  l.destination = detail::get_point(detail::require(doc, "destination", w), "level destination");
  for (const auto& tp : detail::require(doc, "tower_points", w)) {
    TowerPoint t;
    t.position = detail::get_point(detail::require(tp, "position", w), "tower point");
    t.assembly = tp.contains("assembly") ? detail::get_point(tp.at("assembly"), "assembly")
                                         : t.position;
    t.misleading = get_or<bool>(tp, "misleading", false, w);
    l.tower_points.push_back(t);
  }
  for (const auto& wave : detail::require(doc, "waves", w)) {
    if (!wave.is_array() || wave.size() > 15) fail("each wave must list at most 15 counts");
    WaveComposition comp{};
    for (std::size_t i = 0; i < wave.size(); ++i) comp[i] = wave[i].get<int>();
    l.waves.push_back(comp);
  }
  l.inter_wave_interval = get<double>(doc, "inter_wave_interval", w);
  l.initial_gold = get<std::int64_t>(doc, "initial_gold", w);
  l.max_gold = get<std::int64_t>(doc, "max_gold", w);
  l.initial_base_health = get<std::int64_t>(doc, "initial_base_health", w);
  l.refund_rate = get<double>(doc, "refund_rate", w);
  l.gold_refresh_interval = get<std::int64_t>(doc, "gold_refresh_interval", w);
  l.gold_retention_time = get<std::int64_t>(doc, "gold_retention_time", w);
  l.gold_pickup_min = get<std::int64_t>(doc, "gold_pickup_min", w);
  l.gold_pickup_max = get<std::int64_t>(doc, "gold_pickup_max", w);
  if (doc.contains("fog")) {
    const auto& f = doc.at("fog");
    l.fog.initial_center = detail::get_point(detail::require(f, "initial_center", w), "fog");
    l.fog.width = get_or<double>(f, "width", l.fog.width, w);
    l.fog.height = get_or<double>(f, "height", l.fog.height, w);
    l.fog.speed = get_or<double>(f, "speed", l.fog.speed, w);
    l.fog.redirect_interval = get_or<double>(f, "redirect_interval", l.fog.redirect_interval, w);
  }
  if (doc.contains("hero_spawn")) l.hero_spawn = detail::get_point(doc.at("hero_spawn"), "hero");
  if (doc.contains("rules")) {
    const auto& r = doc.at("rules");
    auto& k = l.rules;
    k.freeze_duration = get_or<double>(r, "freeze_duration", k.freeze_duration, w);
    k.pickup_radius = get_or<double>(r, "pickup_radius", k.pickup_radius, w);
    k.spawn_interval = get_or<double>(r, "spawn_interval", k.spawn_interval, w);
    k.enemy_engage_radius = get_or<double>(r, "enemy_engage_radius", k.enemy_engage_radius, w);
    k.knight_contact_radius =
        get_or<double>(r, "knight_contact_radius", k.knight_contact_radius, w);
    k.fire_pulse_interval = get_or<double>(r, "fire_pulse_interval", k.fire_pulse_interval, w);
  }
  l.background = get_or<std::string>(doc, "background", "", w);
  validate_level(l);
  return l;
}

LevelConfig load_level(const std::filesystem::path& path) {
  return parse_level(detail::read_text_file(path));
}

std::string level_to_json(const LevelConfig& l, int indent) {
  ojson doc = ojson::object();
  doc["schema_version"] = 1;
  doc["name"] = l.name;
  ojson roads = ojson::array();
  for (const auto& road : l.roads) {
    ojson r = ojson::array();
    for (const auto& p : road) r.push_back(detail::point_json(p, 1e-6));
    roads.push_back(std::move(r));
  }
  doc["roads"] = std::move(roads);
  doc["destination"] = detail::point_json(l.destination, 1e-6);
  ojson tps = ojson::array();
  for (const auto& tp : l.tower_points) {
    ojson t = ojson::object();
    t["position"] = detail::point_json(tp.position, 1e-6);
    t["assembly"] = detail::point_json(tp.assembly, 1e-6);
    if (tp.misleading) t["misleading"] = true;
    tps.push_back(std::move(t));
  }
  doc["tower_points"] = std::move(tps);
  ojson waves = ojson::array();
  for (const auto& wave : l.waves) waves.push_back(wave);
  doc["waves"] = std::move(waves);
  doc["inter_wave_interval"] = l.inter_wave_interval;
  doc["initial_gold"] = l.initial_gold;
  doc["max_gold"] = l.max_gold;
  doc["initial_base_health"] = l.initial_base_health;
  doc["refund_rate"] = l.refund_rate;
  doc["gold_refresh_interval"] = l.gold_refresh_interval;
  doc["gold_retention_time"] = l.gold_retention_time;
  doc["gold_pickup_min"] = l.gold_pickup_min;
  doc["gold_pickup_max"] = l.gold_pickup_max;
  doc["fog"] = {{"initial_center", detail::point_json(l.fog.initial_center, 1e-6)},
                {"width", l.fog.width},
                {"height", l.fog.height},
                {"speed", l.fog.speed},
                {"redirect_interval", l.fog.redirect_interval}};
  doc["hero_spawn"] = detail::point_json(l.hero_spawn, 1e-6);
  doc["rules"] = {{"freeze_duration", l.rules.freeze_duration},
                  {"pickup_radius", l.rules.pickup_radius},
                  {"spawn_interval", l.rules.spawn_interval},
                  {"enemy_engage_radius", l.rules.enemy_engage_radius},
                  {"knight_contact_radius", l.rules.knight_contact_radius},
                  {"fire_pulse_interval", l.rules.fire_pulse_interval}};
  if (!l.background.empty()) doc["background"] = l.background;
  return doc.dump(indent);
}

std::filesystem::path resolve_level_path(const std::string& ref,
                                         const std::filesystem::path& config_dir) {
  for (const auto& name : kBenchmarkLevels) {
    if (ref == name) {
      std::string file = "lv" + name.substr(2) + ".json";
      return config_dir / "levels" / file;
    }
  }
  return ref;
}

std::filesystem::path default_config_dir() {
  if (const char* env = std::getenv("TDENV_CONFIG_DIR"); env && *env) return env;
  return TDENV_DEFAULT_CONFIG_DIR;
}

}  // namespace tdenv
