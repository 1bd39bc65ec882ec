#include <gtest/gtest.h>

#include "tdenv/prompt.hpp"
#include "test_util.hpp"
#include <json.hpp>

using namespace tdenv;
using tdenv::testing::catalog;
using tdenv::testing::make_env;

namespace {

std::size_t pos_of(const std::string& s, const std::string& needle) {
  const auto p = s.find(needle);
  EXPECT_NE(p, std::string::npos) << "missing: " << needle;
  return p;
}

}  // namespace

TEST(Prompt, SectionsAppearInOrder) {
  Environment env = make_env("Lv2");
  env.reset(3);
  const std::string obs = env.observe_text();
  std::vector<PromptHistoryItem> history;
  for (int i = 0; i < 5; ++i) {
    const std::string before = env.observe_text();
    const Action a{0.1 * i, -0.2, 6};
    env.step(a);
    history.push_back({before, a});
  }
  PromptOptions o;
  o.history_length = 3;
  const std::string p = build_prompt(env.observe_text(), history, env.level(), env.catalog(), o);

  const std::vector<std::string> order = {
      "You are an AI agent playing a video game",
      "Common rules:",
      "The following are the actions you can take.",
      "0 - Build an Archer Tower",
      "11 - Spend gold coins to increase your hero's maximum health.",
      "Action Tips:",
      "error code list",
      "11 - show the attack range of a non-existent tower",
      "- Towers Configuration:",
      "- Knight Configuration:",
      "- Hero Configuration:",
      "- Knight Reinforcements Configuration:",
      "- Enemies Configuration:",
      "Configuration Table Tips:",
      "information about this level",
      "\"Level_Enemy_Movement_Paths\"",
      "history of the past few steps",
      "current real-time game status",
      "Now please tell me the action",
  };
  std::size_t last = 0;
  for (const auto& s : order) {
    const std::size_t at = pos_of(p, s);
    EXPECT_GE(at, last) << s;
    last = at;
  }
  EXPECT_EQ(p.find("Image observation provided."), std::string::npos);
  EXPECT_EQ(p.back(), '\n');
  (void)obs;
}

TEST(Prompt, HistoryKeepsLastItemsWithoutLevelConstants) {
  Environment env = make_env("Lv1");
  env.reset(1);
  std::vector<PromptHistoryItem> history;
  for (int i = 0; i < 4; ++i) {
    history.push_back({env.observe_text(), Action{static_cast<double>(i), 0.0, 6}});
    env.step(noop_action());
  }
  PromptOptions o;
  o.history_length = 2;
  const std::string p = build_prompt(env.observe_text(), history, env.level(), env.catalog(), o);
  const auto h0 = pos_of(p, "history of the past few steps, organized in Json format:\n");
  const auto h1 = pos_of(p, "current real-time game status");
  std::istringstream block(p.substr(h0, h1 - h0));
  std::string line;
  std::getline(block, line);
  std::vector<nlohmann::ordered_json> items;
  while (std::getline(block, line)) {
    if (line.empty() || line[0] != '{') continue;
    if (line.back() == ',') line.pop_back();
    items.push_back(nlohmann::ordered_json::parse(line));
  }
  ASSERT_EQ(items.size(), 2u);
  EXPECT_EQ(items[0]["action"], nlohmann::ordered_json::parse("[2.0, 0.0, 6]"));
  EXPECT_EQ(items[1]["action"], nlohmann::ordered_json::parse("[3.0, 0.0, 6]"));
  EXPECT_FALSE(items[0]["state"].contains("Level_Enemy_Movement_Paths"));
  EXPECT_FALSE(items[0]["state"].contains("Map_Side_Length"));
  EXPECT_TRUE(items[0]["state"].contains("Level_Hero_Realtime_Status"));
}

TEST(Prompt, ZeroHistoryAndVisionFlag) {
  Environment env = make_env("Lv3");
  env.reset(2);
  PromptOptions o;
  o.history_length = 0;
  o.vision = true;
  const std::vector<PromptHistoryItem> history = {{env.observe_text(), noop_action()}};
  const std::string p = build_prompt(env.observe_text(), history, env.level(), env.catalog(), o);
  EXPECT_EQ(p.find("\"action\""), std::string::npos);
  EXPECT_LT(pos_of(p, "current real-time game status"), pos_of(p, "Image observation provided."));
  EXPECT_LT(pos_of(p, "Image observation provided."), pos_of(p, "Now please tell me the action"));
}

TEST(Prompt, LevelBlockCarriesLevelConstants) {
  Environment env = make_env("Lv4");
  const auto j = nlohmann::ordered_json::parse(level_info_json(env.level()));
  EXPECT_EQ(j["Map_Side_Length"], 6.0);
  EXPECT_EQ(j["Map_Left_Boundary"], -3.0);
  EXPECT_EQ(j["Level_Total_Waves_Number"], env.level().total_waves());
  EXPECT_EQ(j["Level_Enemy_Movement_Paths"].size(), env.level().roads.size());
  EXPECT_EQ(j.begin().key(), "Map_Center");
}

TEST(Prompt, RealtimeStateDropsOnlyLevelKeys) {
  Environment env = make_env("Lv1");
  env.reset(5);
  const auto full = nlohmann::ordered_json::parse(env.observe_text());
  const auto rt = nlohmann::ordered_json::parse(realtime_state_json(env.observe_text()));
  EXPECT_LT(rt.size(), full.size());
  for (const auto& [k, v] : rt.items()) EXPECT_EQ(full.at(k), v) << k;
}

TEST(ParseActionText, AcceptsFirstWellFormedObject) {
  auto a = parse_action_text("{\"X\": 1.25, \"Y\": -0.5, \"Action\": 0}");
  ASSERT_TRUE(a);
  EXPECT_EQ(a->x, 1.25);
  EXPECT_EQ(a->y, -0.5);
  EXPECT_EQ(a->c, 0);

  a = parse_action_text("Sure! ```json\n{\"X\": 2, \"Y\": 1, \"Action\": 11}\n``` done");
  ASSERT_TRUE(a);
  EXPECT_EQ(a->c, 11);

  a = parse_action_text("{\"note\": \"{\"} {\"X\": 0.0, \"Y\": 0.0, \"Action\": 6}");
  ASSERT_TRUE(a);
  EXPECT_EQ(a->c, 6);

  a = parse_action_text("{\"plan\": {\"X\": 0.5, \"Y\": 0.5, \"Action\": 3}}");
  ASSERT_TRUE(a);
  EXPECT_EQ(a->c, 3);
}

TEST(ParseActionText, RejectsUnusableOutput) {
  EXPECT_FALSE(parse_action_text(""));
  EXPECT_FALSE(parse_action_text("build an archer tower"));
  EXPECT_FALSE(parse_action_text("{\"X\": 1, \"Y\": 1}"));
  EXPECT_FALSE(parse_action_text("{\"X\": 1, \"Y\": 1, \"Action\": 12}"));
  EXPECT_FALSE(parse_action_text("{\"X\": 1, \"Y\": 1, \"Action\": -1}"));
  EXPECT_FALSE(parse_action_text("{\"X\": 1, \"Y\": 1, \"Action\": 2.5}"));
  EXPECT_FALSE(parse_action_text("{\"X\": \"1\", \"Y\": 1, \"Action\": 2}"));
  EXPECT_FALSE(parse_action_text("{\"X\": 1, \"Y\": 1, \"Action\": 2"));
}
