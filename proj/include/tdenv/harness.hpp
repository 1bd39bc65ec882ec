#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tdenv/agents.hpp"
#include "tdenv/metrics.hpp"
#include "tdenv/trajectory.hpp"

namespace tdenv {

struct RunOptions {
  std::filesystem::path config_dir;
  std::size_t threads = 0;  // 0: hardware concurrency
  std::int64_t max_steps = 100000;
  int action_interval = kDefaultActionInterval;
  PromptOptions prompt;
  std::optional<std::filesystem::path> record_dir;  // write one JSONL trajectory per episode
};

/// Plays one episode. Exceptions from the agent propagate.
EpisodeRecord run_episode(Environment& env, Agent& agent, std::uint64_t seed,
                          const PromptOptions& prompt, std::int64_t max_steps,
                          TrajectoryRecorder* recorder = nullptr);

struct LevelSummary {
  std::string level;
  std::size_t episodes = 0;
  std::size_t failed = 0;
  MeanSe score;
  MeanSe rate;
  std::optional<MeanSe> normalized_score;  // absent without a human baseline
  std::optional<MeanSe> normalized_rate;
};

struct Report {
  std::string agent;
  std::vector<LevelSummary> levels;
  std::vector<EpisodeRecord> episodes;
  std::vector<std::string> notices;
};

/// One episode per (level, seed), run concurrently on separate engines.
/// Failed episodes are excluded from aggregates and listed in notices.
Report run_agent(const AgentFactory& factory, const std::vector<std::string>& levels,
                 const std::vector<std::uint64_t>& seeds, const RunOptions& options);

/// Aggregates finished episodes per level, in first-appearance order.
Report summarize(const std::string& agent, std::vector<EpisodeRecord> episodes);

std::string report_json(const Report& report);
Report report_from_json(const std::string& text);
std::string report_table(const Report& report);

/// Episode record reconstructed from a trajectory (replay-based reporting).
EpisodeRecord episode_from_trajectory(const Trajectory& t);

}  // namespace tdenv
