#include "tdenv/editor.hpp"

#include <limits>

#include "detail/json_util.hpp"

namespace tdenv {
namespace {

using detail::ojson;

constexpr const char* kFormat = "tdenv-editor";
const char* const kSettingKeys[] = {
    "waves",          "inter_wave_interval",  "initial_gold",         "max_gold",
    "initial_base_health", "refund_rate",     "gold_refresh_interval", "gold_retention_time",
    "gold_pickup_min", "gold_pickup_max",     "fog",                  "rules"};

ojson default_settings() {
  ojson s = ojson::object();
  WaveComposition wave{};
  wave[0] = 5;
  s["waves"] = ojson::array({wave});
  s["inter_wave_interval"] = 6.0;
  s["initial_gold"] = 500;
  s["max_gold"] = 3000;
  s["initial_base_health"] = 20;
  s["refund_rate"] = 1.0;
  s["gold_refresh_interval"] = 2;
  s["gold_retention_time"] = 15;
  s["gold_pickup_min"] = 100;
  s["gold_pickup_max"] = 130;
  return s;
}

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("editor export: " + msg); }

Vec2 point(const ojson& v, const std::string& what) {
  const Vec2 p = detail::get_point(v, "editor export " + what);
  if (!std::isfinite(p.x()) || !std::isfinite(p.y()) || !in_map(p))
    fail(what + " (" + std::to_string(p.x()) + ", " + std::to_string(p.y()) +
         ") is outside the map [-3, 3]^2");
  return p;
}

}  // namespace

Vec2 nearest_road_point(const LevelConfig& level, const Vec2& p) {
  Vec2 best = p;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& road : level.roads)
    for (std::size_t i = 0; i + 1 < road.size(); ++i) {
      const Vec2 ab = road[i + 1] - road[i];
      const double len2 = ab.squaredNorm();
      const double t = len2 > 0 ? std::clamp((p - road[i]).dot(ab) / len2, 0.0, 1.0) : 0.0;
      const Vec2 q = road[i] + t * ab;
      const double d = (q - p).norm();
      if (d < best_d) {
        best_d = d;
        best = q;
      }
    }
  return best;
}

LevelConfig import_editor_export(const std::string& text) {
  const ojson doc = detail::parse_document(text, "editor export");
  if (!doc.is_object()) fail("document must be an object");
  detail::check_schema_version(doc, "editor export");
  if (doc.value("format", std::string()) != kFormat)
    fail(std::string("format must be \"") + kFormat + "\"");

  ojson level = ojson::object();
  level["schema_version"] = 1;
  level["name"] = doc.value("name", std::string("custom"));

  const auto& roads = detail::require(doc, "roads", "editor export");
  if (!roads.is_array() || roads.empty()) fail("at least one road is required");
  ojson level_roads = ojson::array();
  for (std::size_t r = 0; r < roads.size(); ++r) {
    const auto& wps = detail::require(roads[r], "waypoints", "editor export road");
    ojson out = ojson::array();
    for (const auto& w : wps) {
      point(w, "road " + std::to_string(r) + " waypoint");
      out.push_back(w);
    }
    level_roads.push_back(std::move(out));
  }
  if (level_roads[0].empty()) fail("road 0 has no waypoints");
  level["roads"] = level_roads;
  level["destination"] = level_roads[0].back();

  // Roads are needed for assembly defaults, so build a provisional level first.
  LevelConfig provisional;
  for (const auto& road : level_roads) {
    std::vector<Vec2> pts;
    for (const auto& w : road) pts.push_back(detail::get_point(w, "editor export road"));
    provisional.roads.push_back(std::move(pts));
  }

  ojson tps = ojson::array();
  for (const auto& tp : detail::require(doc, "tower_points", "editor export")) {
    const Vec2 pos = point(detail::require(tp, "position", "editor export tower point"), "tower point");
    ojson t = ojson::object();
    t["position"] = tp.at("position");
    if (tp.contains("assembly")) {
      point(tp.at("assembly"), "assembly point");
      t["assembly"] = tp.at("assembly");
    } else {
      t["assembly"] = detail::point_json(nearest_road_point(provisional, pos), 1e-6);
    }
    if (tp.value("misleading", false)) t["misleading"] = true;
    tps.push_back(std::move(t));
  }
  level["tower_points"] = std::move(tps);

  ojson settings = default_settings();
  if (doc.contains("settings")) {
    const auto& s = doc.at("settings");
    if (!s.is_object()) fail("settings must be an object");
    for (const char* key : kSettingKeys)
      if (s.contains(key)) settings[key] = s.at(key);
  }
  for (const auto& [k, v] : settings.items()) level[k] = v;
  if (doc.contains("hero_spawn")) {
    point(doc.at("hero_spawn"), "hero spawn");
    level["hero_spawn"] = doc.at("hero_spawn");
  }
  if (doc.contains("background")) {
    const auto& bg = doc.at("background");
    level["background"] = bg.is_object() ? bg.value("image", std::string()) : bg.get<std::string>();
  }
  return parse_level(level.dump());
}

std::string export_editor_document(const LevelConfig& l) {
  const ojson level = ojson::parse(level_to_json(l));
  ojson doc = ojson::object();
  doc["schema_version"] = 1;
  doc["format"] = kFormat;
  doc["name"] = l.name;
  doc["background"] = {{"image", l.background}};
  ojson roads = ojson::array();
  for (const auto& r : level.at("roads")) roads.push_back({{"waypoints", r}});
  doc["roads"] = std::move(roads);
  doc["tower_points"] = level.at("tower_points");
  doc["hero_spawn"] = level.at("hero_spawn");
  ojson settings = ojson::object();
  for (const char* key : kSettingKeys) settings[key] = level.at(key);
  doc["settings"] = std::move(settings);
  return doc.dump(2);
}

}  // namespace tdenv
