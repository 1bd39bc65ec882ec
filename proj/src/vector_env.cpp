#include "tdenv/vector_env.hpp"

#include <algorithm>

#include "tdenv/errors.hpp"

namespace tdenv {

ThreadPool::ThreadPool(std::size_t threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t i = 0; i < threads; ++i) workers_.emplace_back([this] { worker_loop(); });
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  wake_.notify_all();
  for (auto& w : workers_) w.join();
}

void ThreadPool::run_indices() {
  for (;;) {
    std::size_t i;
    const std::function<void(std::size_t)>* job;
    {
      std::lock_guard lock(mu_);
      if (next_ >= n_) return;
      i = next_++;
      job = job_;
    }
    try {
      (*job)(i);
    } catch (...) {
      std::lock_guard lock(mu_);
      if (!error_) error_ = std::current_exception();
    }
    {
      std::lock_guard lock(mu_);
      if (++finished_ == n_) done_.notify_all();
    }
  }
}

void ThreadPool::worker_loop() {
  std::size_t seen = 0;
  for (;;) {
    {
      std::unique_lock lock(mu_);
      wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
    }
    run_indices();
  }
}

void ThreadPool::parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  {
    std::lock_guard lock(mu_);
    job_ = &fn;
    n_ = n;
    next_ = 0;
    finished_ = 0;
    error_ = nullptr;
    ++generation_;
  }
  wake_.notify_all();
  run_indices();  // the caller helps
  std::unique_lock lock(mu_);
  done_.wait(lock, [&] { return finished_ == n_; });
  job_ = nullptr;
  n_ = 0;
  if (error_) std::rethrow_exception(error_);
}

VectorEnvironment::VectorEnvironment(std::vector<Environment> envs, std::size_t threads)
    : envs_(std::move(envs)), pool_(std::make_unique<ThreadPool>(threads)) {
  if (envs_.empty()) throw EnvError("vector environment needs at least one instance");
}

std::vector<Observation> VectorEnvironment::reset(const std::vector<std::uint64_t>& seeds) {
  if (seeds.size() != envs_.size()) throw EnvError("one seed per instance is required");
  std::vector<Observation> out(envs_.size());
  pool_->parallel_for(envs_.size(), [&](std::size_t i) { out[i] = envs_[i].reset(seeds[i]); });
  return out;
}

std::vector<StepResult> VectorEnvironment::step(const std::vector<Action>& actions) {
  if (actions.size() != envs_.size()) throw EnvError("one action per instance is required");
  std::vector<StepResult> out(envs_.size());
  pool_->parallel_for(envs_.size(), [&](std::size_t i) { out[i] = envs_[i].step(actions[i]); });
  return out;
}

}  // namespace tdenv
