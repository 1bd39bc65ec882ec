#include "tdenv/agents.hpp"

#include <stdexcept>

namespace tdenv {

void RandomAgent::begin_episode(std::uint64_t seed) {
  // Separate stream from the simulator's so agent draws never perturb it.
  rng_.reseed(seed ^ 0x9e3779b97f4a7c15ULL);
}

std::optional<Action> RandomAgent::act(const AgentInput&) {
  Action a;
  a.x = rng_.uniform(-kMapHalfExtent, kMapHalfExtent);
  a.y = rng_.uniform(-kMapHalfExtent, kMapHalfExtent);
  a.c = static_cast<int>(rng_.uniform_int(0, kActionTypeCount - 1));
  return a;
}

std::optional<Action> ScriptedAgent::act(const AgentInput&) {
  if (next_ < actions_.size()) return actions_[next_++];
  return noop_action();
}

std::optional<Action> TextAgent::act(const AgentInput& input) {
  return parse_action_text(model_(input.prompt));
}

AgentFactory builtin_agent(const std::string& name) {
  if (name == "random") return [] { return std::make_unique<RandomAgent>(); };
  if (name == "noop") return [] { return std::make_unique<NoopAgent>(); };
  throw std::invalid_argument("unknown agent '" + name + "' (expected random or noop)");
}

}  // namespace tdenv
