#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tdenv/action.hpp"
#include "tdenv/catalog.hpp"
#include "tdenv/clock.hpp"
#include "tdenv/level.hpp"

namespace tdenv {

inline constexpr int kTrajectorySchemaVersion = 1;

struct TrajectoryHeader {
  std::string level;  // "Lv1".."Lv5" or a level file path
  std::uint64_t seed = 0;
  int action_interval = kDefaultActionInterval;
  std::string source = "agent";  // "agent" or "human"
  std::string agent;             // agent name, informational
};

/// One applied action. `t` is the tick it was applied at; the digest covers
/// the textual observation seen just before; reward and done cover the span
/// up to the next record (or the end of the episode).
struct TrajectoryRecord {
  Ticks t = 0;
  std::uint64_t observation_digest = 0;
  Action action;
  double reward = 0.0;
  bool done = false;
  int error_code = 0;

  friend bool operator==(const TrajectoryRecord&, const TrajectoryRecord&) = default;
};

struct TrajectoryFooter {
  Ticks final_tick = 0;
  std::uint64_t final_digest = 0;
  double score = 0.0;
  std::int64_t valid_actions = 0;
  std::int64_t total_actions = 0;
  bool done = false;
};

struct Trajectory {
  TrajectoryHeader header;
  std::vector<TrajectoryRecord> records;
  std::optional<TrajectoryFooter> footer;
};

/// Builds a trajectory incrementally while an episode runs.
class TrajectoryRecorder {
 public:
  explicit TrajectoryRecorder(TrajectoryHeader header) { traj_.header = std::move(header); }

  /// Call when an action is applied at tick t.
  void record(Ticks t, const std::string& observation_text, const Action& action, int error_code);
  /// Adds reward accrued since the last record.
  void add_outcome(double reward, bool done);
  void finish(Ticks final_tick, const std::string& final_observation_text, bool done);

  const Trajectory& trajectory() const { return traj_; }

 private:
  Trajectory traj_;
  double pending_reward_before_first_ = 0.0;
};

/// Line-delimited JSON: header, one line per record, footer.
std::string to_jsonl(const Trajectory& t);
Trajectory parse_jsonl(const std::string& text);
void save_trajectory(const Trajectory& t, const std::filesystem::path& path);
Trajectory load_trajectory(const std::filesystem::path& path);

struct ReplayReport {
  bool identical = true;
  std::string mismatch;  // first divergence, empty when identical
  double score = 0.0;
  std::int64_t valid_actions = 0;
  std::int64_t total_actions = 0;
  Ticks final_tick = 0;
};

/// Re-runs the trajectory and compares every digest, error code, reward and
/// done flag.
ReplayReport replay(const Trajectory& t, const std::filesystem::path& config_dir);
ReplayReport replay(const Trajectory& t, const LevelConfig& level, const EntityCatalog& catalog);

}  // namespace tdenv
