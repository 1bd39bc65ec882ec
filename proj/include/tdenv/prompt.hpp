#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tdenv/action.hpp"
#include "tdenv/catalog.hpp"
#include "tdenv/level.hpp"

namespace tdenv {

struct PromptOptions {
  std::size_t history_length = 3;
  bool vision = false;  // an image accompanies the prompt
};

/// A past step: the textual observation (compact JSON) and the action taken.
struct PromptHistoryItem {
  std::string observation;
  Action action;
};

/// Assembles the zero-shot prompt: rules, actions and tips, error codes,
/// catalog tables, level info, history, current state, answer instruction.
/// `current_observation` and history observations are textual observations;
/// level constants are moved into the level-info block. Only the last
/// options.history_length items of `history` are used.
std::string build_prompt(const std::string& current_observation,
                         const std::vector<PromptHistoryItem>& history, const LevelConfig& level,
                         const EntityCatalog& catalog, const PromptOptions& options = {});

/// Static level block (map geometry and level constants), pretty-printed.
std::string level_info_json(const LevelConfig& level);

/// The realtime part of a textual observation.
std::string realtime_state_json(const std::string& observation, int indent = -1);

/// Extracts the first well-formed {"X": .., "Y": .., "Action": ..} object from
/// model output. Returns nullopt when there is none.
std::optional<Action> parse_action_text(const std::string& text);

}  // namespace tdenv
