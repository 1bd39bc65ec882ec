#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "tdenv/env.hpp"

namespace tdenv {

// --- action discretizer: 10 x 10 grid of cell centres times 12 action types ---

inline constexpr int kGridCells = 10;
inline constexpr double kGridPitch = kMapSideLength / kGridCells;
inline constexpr int kDiscreteActionCount = kGridCells * kGridCells * kActionTypeCount;

/// i indexes x, j indexes y.
struct GridAction {
  int i = 0;
  int j = 0;
  int c = 0;
  friend bool operator==(const GridAction&, const GridAction&) = default;
};

int encode_grid(const GridAction& g);        // (i*10 + j)*12 + c
GridAction decode_grid(int flat);            // throws std::out_of_range
double grid_center(int cell);                // -3 + 0.6*cell + 0.3
Action discretize(int flat);                 // cell centres
GridAction continuous_to_grid(const Action& a);

// --- reward and pixel preprocessing ---

inline constexpr double kStepPenalty = -5e-4;

/// reward += penalty; nothing else changes.
void apply_step_penalty(StepResult& r, double penalty = kStepPenalty);

/// Mean-pools an RGB image by `factor` along both axes (dimensions must divide).
std::vector<std::uint8_t> downsample(const std::vector<std::uint8_t>& rgb, int width, int height,
                                     int factor);

/// 512x512 -> 128x128 frame.
std::vector<std::uint8_t> downsample_frame(const PixelFrame& frame);

// --- observation/action history ---

template <typename Obs>
struct HistoryEntry {
  Obs observation;
  Action action;
};

/// The last k (observation, action) pairs. After reset the buffer holds k
/// copies of the reset observation paired with noop.
template <typename Obs>
class HistoryBuffer {
 public:
  explicit HistoryBuffer(std::size_t k = 3) : k_(k) {}

  void reset(const Obs& initial) {
    entries_.assign(k_, HistoryEntry<Obs>{initial, noop_action()});
  }

  void push(const Obs& observation, const Action& action) {
    if (k_ == 0) return;
    if (entries_.size() == k_) entries_.pop_front();
    entries_.push_back({observation, action});
  }

  const std::deque<HistoryEntry<Obs>>& entries() const { return entries_; }
  std::size_t capacity() const { return k_; }

 private:
  std::size_t k_;
  std::deque<HistoryEntry<Obs>> entries_;
};

struct WrapperOptions {
  bool step_penalty = true;
  bool downsample_pixels = true;
  std::size_t history = 3;
};

struct WrappedObservation {
  Observation observation;
  std::vector<std::uint8_t> small_pixels;  // 128x128x3 when pixels are requested
};

struct WrappedStep {
  WrappedObservation observation;
  double reward = 0.0;
  double raw_reward = 0.0;
  bool done = false;
  StepInfo info;
};

/// Training-side preprocessing around an Environment. The penalty touches
/// only the reward and downsampling only the pixels, so their order does not
/// matter. History holds textual observations.
class WrappedEnvironment {
 public:
  WrappedEnvironment(Environment env, WrapperOptions options = {});

  WrappedObservation reset(std::uint64_t seed);
  WrappedStep step(const Action& action);
  WrappedStep step(int flat_index) { return step(discretize(flat_index)); }

  const HistoryBuffer<std::string>& history() const { return history_; }
  Environment& env() { return env_; }

 private:
  WrappedObservation wrap(Observation o) const;

  Environment env_;
  WrapperOptions options_;
  HistoryBuffer<std::string> history_;
  std::string last_text_;
};

}  // namespace tdenv
