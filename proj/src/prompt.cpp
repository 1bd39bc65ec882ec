#include "tdenv/prompt.hpp"

#include <cmath>
#include <sstream>

#include "detail/json_util.hpp"

namespace tdenv {
namespace {

using detail::ojson;

// Message formats the evaluation relies on; keep the wording stable.
constexpr const char* kIntro =
    "You are an AI agent playing a video game, you need to build different types of defense "
    "towers at different locations on the map to prevent enemies from reaching their destination.";

constexpr const char* kRules[] = {
    "You need to spend gold coins to build towers, upgrade towers and increase your hero's maximum "
    "health. Gold coins will continue to drop at random locations on the map. You can send your "
    "knights or hero to pick up gold coins, and the gold coins will be picked up automatically when "
    "your knights or hers are near the gold coins.",
    "If the number of gold coins you hold exceeds the maximum value, the excess will be discarded.",
    "You will be given a certain amount of health at the beginning of each level. Every time an "
    "enemy reaches its destination, you will lose a point of health. When your health reaches 0, "
    "the game ends and the mission fails. Try your best to avoid losing any health points.",
    "Enemies appear in waves, and each level has a different number of enemy waves. There is a "
    "certain amount of time between enemy waves. If your health is still greater than 0 after you "
    "have resisted all waves of enemy attacks, the mission is successful.",
    "There are several paths for the enemies, and each enemy will randomly choose one.",
    "The battlefield of this game is a square area, the details have been included in the level "
    "state part blow.",
    "Between each path point, enemies will only move in a straight line.",
    "The Fog Of War in the battlefield is an irregular cloud-shaped area that can obscure any "
    "element in the game. Its approximate dimensions are 3.5 wide and 1.7 tall. The obscured "
    "towers, knights and heroes will no longer attack the enemy, but if the Fog Of War obscures "
    "the Fire Of Rage released by the hero, it will lose its obstruction ability during this time.",
};

constexpr const char* kActions[] = {
    "0 - Build an Archer Tower at the coordinates you specify,",
    "1 - Build an Magician Tower at the coordinates you specify,",
    "2 - Build an Knight Tower at the coordinates you specify,",
    "3 - Upgrade a tower at the coordinates you specify,",
    "4 - Sell a tower at the coordinates you specify,",
    "5 - Show the attack range of a tower at the coordinates you specify,",
    "6 - Noop: do nothing,",
    "7 - Change the knights assembly location of a Knight Tower to the coordinates you specify,",
    "8 - Deploy Knight Reinforcements to the coordinates you specify,",
    "9 - Dispatch your hero to the coordinates you specify,",
    "10 - Your hero casts 'Fire of Rage' at your hero's coordinates,",
    "11 - Spend gold coins to increase your hero's maximum health.",
};

constexpr const char* kActionTips[] = {
    "Building a tower, upgrading a tower or increasing your hero's maximum health requires you to "
    "have enough gold coins, otherwise it will be an invalid action.",
    "Action 0, 1, 2, 3, 4, 5 are only valid if the coordinates you specify are within the bounding "
    "box of the tower point. The bounding box of the tower point is a square with its coordinate "
    "as the center and a side length of 0.5.",
    "Action 7 is only valid if the coordinates you specify is within the attack range of a Knight "
    "Tower.",
    "Action 8 will be invalid during the Knight Reinforcements cooldown.",
    "Action 9 means that your hero starts moving to the coordinates you specify, not a direct "
    "teleportation. If you set a new target coordinate during its movement, it will start moving "
    "to the new target coordinates.",
    "Actions 9, 10, 11 are invalid if your hero dies.",
    "If a tower point already has a tower, you should not build a tower at this tower point, which "
    "will result in an invalid action.",
    "You should provide your action in json format, only three elements in this json structure: "
    "\"X\" is a floating point number representing the horizontal coordinate of the action you "
    "want to perform; \"Y\" is a floating point number representing the vertical coordinate of the "
    "action you want to perform; \"Action\" is an integer representing the index of action you "
    "want to perform. ",
    "Action 4 will return the funds spent on its construction and upgrade, but it may not be fully "
    "refunded, it depends on the 'Level_Selling_Tower_Refund_Rate' value.",
};

constexpr const char* kErrorCodes[] = {
    "0 - no error",
    "1 - build a tower where there is already a tower",
    "2 - build a tower but don't have enough gold coins",
    "3 - upgrade a non-existent tower",
    "4 - upgrade a tower but don't have enough gold coins",
    "5 - sell a non-existent tower",
    "6 - failure to provide valid coordinates for building, upgrading, selling a tower or showing "
    "the attack range of a tower",
    "7 - failed to provide the valid coordinates for changing the knights assembly location of a "
    "Knight Tower",
    "8 - deploy Knight Reinforcements that are on cooldown",
    "9 - try to manipulate a dead hero",
    "10 - increase your hero's maximum health but don't have enough gold coins",
    "11 - show the attack range of a non-existent tower",
};

constexpr const char* kConfigTips[] = {
    "The attack range of the towers, hero, hero's skill and knights is circular, the positions of "
    "the circle centers are their position, and the attack range described above is the diameter. "
    "When enemies enter this range they will attack.",
    "The final attack value of the towers, hero, hero's skill, knights and enemies is equal to "
    "AttackDamage plus a random value in the range of 0 to AttackExtraDamage.",
    "The unit of time in this tower defense game is seconds.",
    "The unit of range or space in this tower defense game is a virtual unified unit. It can be "
    "used directly for calculation during reasoning without conversion.",
    "The AttackSpeed of the towers, hero, knights and enemies refers to the time interval between "
    "attacks. For the Knight Tower, it refers to the time interval between summoning knights.",
    "Upgrading will increase the attack power of the Archer Tower and the Magician Tower, as well "
    "as the attack value and movement speed of the knights summoned by the Knight Tower.",
};

constexpr const char* kAnswer =
    "Now please tell me the action you want to perform in this step, in JSON format, containing a "
    "floating point X coordinate, a floating point Y coordinate and an integer action index. Your "
    "answer should not contain any other text, just provide this json.";

// Level constants shown once in the level block, in display order.
constexpr const char* kLevelKeys[] = {
    "Map_Center",
    "Map_Side_Length",
    "Map_Left_Boundary",
    "Map_Right_Boundary",
    "Map_Upper_Boundary",
    "Map_Lower_Boundary",
    "Tower_Points_Bounding_Box_Width_Height",
    "Level_Maximum_Gold_Coins",
    "Level_Initial_Health",
    "Level_Total_Waves_Number",
    "Level_Inter_Wave_Interval",
    "Level_Selling_Tower_Refund_Rate",
    "Level_Gold_Coins_Refresh_Interval",
    "Level_Gold_Coins_Retention_Time",
    "Level_Gold_Coins_Maximum_Pickup_Amount",
    "Level_Gold_Coins_Minimum_Pickup_Amount",
    "Level_Enemy_Movement_Paths",
    "Level_Enemy_Destination",
};

bool is_level_key(const std::string& k) {
  for (const char* key : kLevelKeys)
    if (k == key) return true;
  return false;
}

ojson realtime_part(const ojson& obs) {
  ojson out = ojson::object();
  for (const auto& [k, v] : obs.items())
    if (!is_level_key(k)) out[k] = v;
  return out;
}

void bullets(std::ostringstream& out, const char* const* items, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out << "- " << items[i] << "\n\n";
}

void lines(std::ostringstream& out, const char* const* items, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out << items[i] << "\n\n";
}

}  // namespace

std::string level_info_json(const LevelConfig& level) {
  ojson l = ojson::object();
  l["Map_Center"] = detail::point_json(Vec2::Zero());
  l["Map_Side_Length"] = kMapSideLength;
  l["Map_Left_Boundary"] = -kMapHalfExtent;
  l["Map_Right_Boundary"] = kMapHalfExtent;
  l["Map_Upper_Boundary"] = kMapHalfExtent;
  l["Map_Lower_Boundary"] = -kMapHalfExtent;
  l["Tower_Points_Bounding_Box_Width_Height"] = kTowerBoxSide;
  l["Level_Maximum_Gold_Coins"] = level.max_gold;
  l["Level_Initial_Health"] = level.initial_base_health;
  l["Level_Total_Waves_Number"] = level.total_waves();
  l["Level_Inter_Wave_Interval"] = level.inter_wave_interval;
  l["Level_Selling_Tower_Refund_Rate"] = level.refund_rate;
  l["Level_Gold_Coins_Refresh_Interval"] = level.gold_refresh_interval;
  l["Level_Gold_Coins_Retention_Time"] = level.gold_retention_time;
  l["Level_Gold_Coins_Maximum_Pickup_Amount"] = level.gold_pickup_max;
  l["Level_Gold_Coins_Minimum_Pickup_Amount"] = level.gold_pickup_min;
  ojson paths = ojson::array();
  for (const auto& road : level.roads) {
    ojson r = ojson::array();
    for (const auto& w : road) r.push_back(detail::point_json(w));
    paths.push_back(std::move(r));
  }
  l["Level_Enemy_Movement_Paths"] = std::move(paths);
  l["Level_Enemy_Destination"] = detail::point_json(level.destination);
  return l.dump(4);
}

std::string realtime_state_json(const std::string& observation, int indent) {
  return realtime_part(detail::parse_document(observation, "observation")).dump(indent);
}

std::string build_prompt(const std::string& current, const std::vector<PromptHistoryItem>& history,
                         const LevelConfig& level, const EntityCatalog& catalog,
                         const PromptOptions& options) {
  std::ostringstream out;
  out << kIntro << "\n\n";
  out << "Common rules:\n\n";
  bullets(out, kRules, std::size(kRules));
  out << "The following are the actions you can take. And for each action, you also need to "
         "provide a horizontal and a vertical coordinate between -3.0 and 3.0.\n\n";
  lines(out, kActions, std::size(kActions));
  out << "Action Tips:\n\n";
  bullets(out, kActionTips, std::size(kActionTips));
  out << "The following are the actions error code list, If you performed an invalid action, you "
         "can find out why here:\n\n";
  lines(out, kErrorCodes, std::size(kErrorCodes));
  out << "The following is the configuration table of each component of the game, organized in "
         "Json format:\n\n";
  out << "- Towers Configuration:\n" << catalog.towers_json << "\n\n";
  out << "- Knight Configuration:\n" << catalog.knight_json << "\n\n";
  out << "- Hero Configuration:\n" << catalog.hero_json << "\n\n";
  out << "- Knight Reinforcements Configuration:\n" << catalog.reinforcements_json << "\n\n";
  out << "- Enemies Configuration:\n" << catalog.enemies_json << "\n\n";
  out << "Configuration Table Tips:\n\n";
  bullets(out, kConfigTips, std::size(kConfigTips));
  out << "The following is the information about this level, organized in Json format:\n";
  out << level_info_json(level) << "\n\n";

  out << "The following is the history of the past few steps, organized in Json format:\n";
  const std::size_t k = std::min(options.history_length, history.size());
  for (std::size_t i = history.size() - k; i < history.size(); ++i) {
    ojson item = ojson::object();
    item["state"] = realtime_part(detail::parse_document(history[i].observation, "observation"));
    item["action"] = ojson::array({history[i].action.x, history[i].action.y, history[i].action.c});
    out << item.dump() << (i + 1 < history.size() ? ",\n" : "\n");
  }
  out << "\n";

  out << "The following is the current real-time game status of this step, organized in Json "
         "format:\n";
  out << realtime_state_json(current, 4) << "\n\n";
  if (options.vision) out << "Image observation provided.\n\n";
  out << kAnswer << "\n";
  return out.str();
}

std::optional<Action> parse_action_text(const std::string& text) {
  for (std::size_t start = text.find('{'); start != std::string::npos;
       start = text.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    std::size_t end = std::string::npos;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char ch = text[i];
      if (in_string) {
        if (ch == '\\') ++i;
        else if (ch == '"') in_string = false;
        continue;
      }
      if (ch == '"') in_string = true;
      else if (ch == '{') ++depth;
      else if (ch == '}' && --depth == 0) {
        end = i;
        break;
      }
    }
    if (end == std::string::npos) continue;
    const auto j = ojson::parse(text.substr(start, end - start + 1), nullptr, false);
    if (j.is_discarded() || !j.is_object()) continue;
    if (!j.contains("X") || !j.contains("Y") || !j.contains("Action")) continue;
    const auto &x = j.at("X"), &y = j.at("Y"), &c = j.at("Action");
    if (!x.is_number() || !y.is_number() || !c.is_number_integer()) continue;
    const Action a{x.get<double>(), y.get<double>(), c.get<int>()};
    if (!std::isfinite(a.x) || !std::isfinite(a.y) || a.c < 0 || a.c >= kActionTypeCount) continue;
    return a;
  }
  return std::nullopt;
}

}  // namespace tdenv
