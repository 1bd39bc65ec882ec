#include "tdenv/env.hpp"

#include "tdenv/errors.hpp"
#include "tdenv/sim.hpp"

namespace tdenv {

Environment::Environment(std::shared_ptr<const LevelConfig> level,
                         std::shared_ptr<const EntityCatalog> catalog, EnvOptions options)
    : level_(std::move(level)), catalog_(std::move(catalog)), options_(options) {
  if (!level_ || !catalog_) throw EnvError("environment needs a level and a catalog");
  if (options_.action_interval < 1) throw EnvError("action_interval must be at least 1 tick");
}

Environment Environment::from_config(const std::string& level_ref,
                                     const std::filesystem::path& config_dir, EnvOptions options) {
  auto catalog = std::make_shared<const EntityCatalog>(load_catalog(config_dir / "catalog"));
  auto level = std::make_shared<const LevelConfig>(load_level(resolve_level_path(level_ref, config_dir)));
  return Environment(std::move(level), std::move(catalog), options);
}

Observation Environment::reset(std::uint64_t seed) {
  seed_ = seed;
  state_ = make_initial_state(*level_, *catalog_, seed);
  started_ = true;
  done_ = is_terminal(state_, *level_);
  return observe();
}

void Environment::require_live() const {
  if (!started_) throw EnvError("environment not reset; call reset(seed) first");
  if (done_) throw EnvError("episode is over; call reset(seed) to start a new one");
}

int Environment::apply(const Action& action) {
  require_live();
  check_action(action);
  return execute_action(state_, *level_, *catalog_, action);
}

std::int64_t Environment::advance(Ticks ticks) {
  require_live();
  const std::int64_t before = state_.base_health_lost;
  for (Ticks i = 0; i < ticks && !done_; ++i) {
    tick(state_, *level_, *catalog_);
    done_ = is_terminal(state_, *level_);
  }
  return state_.base_health_lost - before;
}

StepResult Environment::step(const Action& action) {
  require_live();
  check_action(action);
  const std::int64_t before = state_.base_health_lost;
  execute_action(state_, *level_, *catalog_, action);
  for (int i = 0; i < options_.action_interval && !done_; ++i) {
    tick(state_, *level_, *catalog_);
    done_ = is_terminal(state_, *level_);
  }
  StepResult r;
  r.reward = static_cast<double>(before - state_.base_health_lost);
  r.done = done_;
  r.info = info();
  r.observation = observe();
  return r;
}

StepInfo Environment::info() const {
  StepInfo i;
  i.action = state_.last_action;
  i.step_index = state_.step_index;
  i.sim_time = state_.sim_time();
  i.gold = state_.gold;
  i.base_health = state_.base_health;
  i.wave = state_.wave_index;
  i.gold_collection_count = state_.gold_collection_count;
  i.friendly_fire_compensation_count = state_.friendly_fire_compensation_count;
  return i;
}

Observation Environment::observe() const { return observe(options_.modalities); }

Observation Environment::observe(const Modalities& m) const {
  if (!started_) throw EnvError("environment not reset; call reset(seed) first");
  Observation o;
  const Snapshot snap = take_snapshot(state_, *level_);
  if (m.text) o.text = render_text(snap, *level_, *catalog_);
  if (m.structured) o.structured = flatten(snap, *level_);
  if (m.pixels) o.pixels = render_pixels(snap, *level_, *catalog_);
  return o;
}

std::string Environment::observe_text(int indent) const {
  if (!started_) throw EnvError("environment not reset; call reset(seed) first");
  return render_text(state_, *level_, *catalog_, indent);
}

}  // namespace tdenv
