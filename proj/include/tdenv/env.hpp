#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "tdenv/action.hpp"
#include "tdenv/catalog.hpp"
#include "tdenv/level.hpp"
#include "tdenv/observation.hpp"
#include "tdenv/state.hpp"

namespace tdenv {

struct Modalities {
  bool text = true;
  bool structured = false;
  bool pixels = false;
};

struct EnvOptions {
  int action_interval = kDefaultActionInterval;  // ticks per step()
  Modalities modalities;
};

struct Observation {
  std::string text;                    // compact JSON, empty unless requested
  Eigen::VectorXd structured;          // length 759 when requested
  std::optional<PixelFrame> pixels;
};

struct StepInfo {
  ActionRecord action;
  Ticks step_index = 0;
  double sim_time = 0.0;
  std::int64_t gold = 0;
  std::int64_t base_health = 0;
  int wave = 1;
  std::int64_t gold_collection_count = 0;
  std::int64_t friendly_fire_compensation_count = 0;
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

/// One episode engine bound to a level. Not thread-safe; use one instance per
/// thread.
class Environment {
 public:
  Environment(std::shared_ptr<const LevelConfig> level, std::shared_ptr<const EntityCatalog> catalog,
              EnvOptions options = {});

  /// Loads the catalog and a level ("Lv1".."Lv5" or a path) from `config_dir`.
  static Environment from_config(const std::string& level_ref,
                                 const std::filesystem::path& config_dir, EnvOptions options = {});

  Observation reset(std::uint64_t seed);

  /// Applies `action` at the start of the window, then advances
  /// options.action_interval ticks (fewer if the episode ends). Throws EnvError
  /// when called before reset() or after the episode ended.
  StepResult step(const Action& action);

  /// Tick-level control for real-time play. apply() acts without advancing and
  /// returns the error code; advance() returns the base health lost.
  int apply(const Action& action);
  std::int64_t advance(Ticks ticks);

  Observation observe() const;
  Observation observe(const Modalities& m) const;
  std::string observe_text(int indent = -1) const;

  bool done() const { return done_; }
  bool started() const { return started_; }
  std::uint64_t seed() const { return seed_; }
  const GameState& state() const { return state_; }
  const LevelConfig& level() const { return *level_; }
  const EntityCatalog& catalog() const { return *catalog_; }
  const std::shared_ptr<const LevelConfig>& level_ptr() const { return level_; }
  const std::shared_ptr<const EntityCatalog>& catalog_ptr() const { return catalog_; }
  const EnvOptions& options() const { return options_; }
  void set_modalities(const Modalities& m) { options_.modalities = m; }

 private:
  void require_live() const;
  StepInfo info() const;

  std::shared_ptr<const LevelConfig> level_;
  std::shared_ptr<const EntityCatalog> catalog_;
  EnvOptions options_;
  GameState state_;
  std::uint64_t seed_ = 0;
  bool started_ = false;
  bool done_ = false;
};

}  // namespace tdenv
