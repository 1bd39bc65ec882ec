#pragma once

#include <memory>
#include <vector>

#include "tdenv/env.hpp"
#include "tdenv/thread_pool.hpp"

namespace tdenv {

/// Batch facade over independent environments. Each instance is stepped by
/// at most one worker at a time, so results equal serial stepping.
class VectorEnvironment {
 public:
  explicit VectorEnvironment(std::vector<Environment> envs, std::size_t threads = 0);

  std::vector<Observation> reset(const std::vector<std::uint64_t>& seeds);
  /// Stepping a finished instance throws; reset it first.
  std::vector<StepResult> step(const std::vector<Action>& actions);

  std::size_t size() const { return envs_.size(); }
  Environment& at(std::size_t i) { return envs_.at(i); }

 private:
  std::vector<Environment> envs_;
  std::unique_ptr<ThreadPool> pool_;
};

}  // namespace tdenv
