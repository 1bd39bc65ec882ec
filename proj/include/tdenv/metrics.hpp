#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tdenv/clock.hpp"

namespace tdenv {

/// Synthetic error code for model output that contains no usable action.
/// Counted as invalid; kept apart from the game's codes 0..11.
inline constexpr int kParseFailureCode = 12;

struct EpisodeRecord {
  std::string level;
  std::uint64_t seed = 0;
  std::vector<int> error_codes;  // one per agent decision
  double score = 0.0;            // sum of raw rewards
  std::int64_t valid_action_count = 0;
  std::int64_t total_action_count = 0;
  std::int64_t parse_failures = 0;
  Ticks final_tick = 0;
  bool cleared = false;    // all waves survived
  bool truncated = false;  // hit the step cap before the episode ended
  bool failed = false;     // agent raised; excluded from aggregates
  std::string failure;
};

double score(const EpisodeRecord& r);
/// Throws std::domain_error when no actions were taken.
double valid_action_rate(const EpisodeRecord& r);
double valid_action_rate(std::int64_t valid, std::int64_t total);

/// (raw - minimum) / (human - minimum); throws std::domain_error when
/// human == minimum.
double normalize(double raw, double human, double minimum);

struct BaselineEntry {
  std::string level;
  double human_score = 0.0;
  double human_rate = 1.0;
  double min_score = -20.0;
  double min_rate = 0.0;
};

/// Human expert means per benchmark level.
const std::array<BaselineEntry, 5>& human_baselines();
/// Throws std::out_of_range for levels without a baseline.
const BaselineEntry& baseline_for(const std::string& level);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean (sample sd / sqrt(n))
  std::size_t n = 0;
};

MeanSe mean_se(const std::vector<double>& xs);

}  // namespace tdenv
