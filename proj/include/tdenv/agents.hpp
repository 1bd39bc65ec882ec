#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tdenv/env.hpp"
#include "tdenv/prompt.hpp"
#include "tdenv/rng.hpp"

namespace tdenv {

/// What an agent sees each decision. `prompt` is filled only for agents that
/// ask for it.
struct AgentInput {
  const Environment& env;
  const std::vector<PromptHistoryItem>& history;
  const std::string& observation;  // textual observation
  std::string prompt;
};

/// Decision maker. nullopt means the agent produced no usable action (a parse
/// failure); the harness then plays a noop and counts it as invalid.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  virtual void begin_episode(std::uint64_t /*seed*/) {}
  virtual bool wants_prompt() const { return false; }
  virtual std::optional<Action> act(const AgentInput& input) = 0;
};

/// Uniform x, y over the map and uniform action index.
class RandomAgent : public Agent {
 public:
  std::string name() const override { return "random"; }
  void begin_episode(std::uint64_t seed) override;
  std::optional<Action> act(const AgentInput& input) override;

 private:
  Rng rng_;
};

class NoopAgent : public Agent {
 public:
  std::string name() const override { return "noop"; }
  std::optional<Action> act(const AgentInput&) override { return noop_action(); }
};

/// Plays a fixed action list, then noops.
class ScriptedAgent : public Agent {
 public:
  explicit ScriptedAgent(std::vector<Action> actions) : actions_(std::move(actions)) {}
  std::string name() const override { return "scripted"; }
  void begin_episode(std::uint64_t) override { next_ = 0; }
  std::optional<Action> act(const AgentInput&) override;

 private:
  std::vector<Action> actions_;
  std::size_t next_ = 0;
};

/// Adapts a text model: receives the prompt, returns raw text which is parsed
/// for the first {X, Y, Action} object.
class TextAgent : public Agent {
 public:
  using Model = std::function<std::string(const std::string& prompt)>;
  TextAgent(std::string name, Model model) : name_(std::move(name)), model_(std::move(model)) {}
  std::string name() const override { return name_; }
  bool wants_prompt() const override { return true; }
  std::optional<Action> act(const AgentInput& input) override;

 private:
  std::string name_;
  Model model_;
};

using AgentFactory = std::function<std::unique_ptr<Agent>()>;

/// "random", "noop". Throws std::invalid_argument for anything else.
AgentFactory builtin_agent(const std::string& name);

}  // namespace tdenv
