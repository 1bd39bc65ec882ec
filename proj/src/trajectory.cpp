#include "tdenv/trajectory.hpp"

#include <fstream>
#include <memory>
#include <sstream>

#include "detail/json_util.hpp"
#include "tdenv/env.hpp"
#include "tdenv/errors.hpp"
#include "tdenv/observation.hpp"

namespace tdenv {

using detail::ojson;

void TrajectoryRecorder::record(Ticks t, const std::string& obs, const Action& a, int code) {
  TrajectoryRecord r;
  r.t = t;
  r.observation_digest = fnv1a64(obs);
  r.action = a;
  r.error_code = code;
  traj_.records.push_back(r);
}

void TrajectoryRecorder::add_outcome(double reward, bool done) {
  if (traj_.records.empty()) {
    pending_reward_before_first_ += reward;
    return;
  }
  traj_.records.back().reward += reward;
  traj_.records.back().done = traj_.records.back().done || done;
}

void TrajectoryRecorder::finish(Ticks final_tick, const std::string& final_obs, bool done) {
  TrajectoryFooter f;
  f.final_tick = final_tick;
  f.final_digest = fnv1a64(final_obs);
  f.score = pending_reward_before_first_;
  for (const auto& r : traj_.records) {
    f.score += r.reward;
    ++f.total_actions;
    if (r.error_code == kOk) ++f.valid_actions;
  }
  f.done = done;
  traj_.footer = f;
}

namespace {

// Digests are written as hex strings: JSON numbers lose 64-bit precision in
// many readers.
std::string hex(std::uint64_t v) {
  std::ostringstream ss;
  ss << std::hex << v;
  return ss.str();
}

std::uint64_t unhex(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used, 16);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("trajectory: bad digest '" + s + "'");
  }
}

}  // namespace

std::string to_jsonl(const Trajectory& t) {
  std::string out;
  ojson h = ojson::object();
  h["schema_version"] = kTrajectorySchemaVersion;
  h["kind"] = "header";
  h["level"] = t.header.level;
  h["seed"] = t.header.seed;
  h["action_interval"] = t.header.action_interval;
  h["source"] = t.header.source;
  h["agent"] = t.header.agent;
  out += h.dump() + "\n";
  for (const auto& r : t.records) {
    ojson j = ojson::object();
    j["t"] = r.t;
    j["observation_digest"] = hex(r.observation_digest);
    j["action"] = ojson::array({r.action.x, r.action.y, r.action.c});
    j["reward"] = r.reward;
    j["done"] = r.done;
    j["error_code"] = r.error_code;
    out += j.dump() + "\n";
  }
  if (t.footer) {
    const auto& f = *t.footer;
    ojson j = ojson::object();
    j["kind"] = "footer";
    j["final_tick"] = f.final_tick;
    j["final_digest"] = hex(f.final_digest);
    j["score"] = f.score;
    j["valid_actions"] = f.valid_actions;
    j["total_actions"] = f.total_actions;
    j["done"] = f.done;
    out += j.dump() + "\n";
  }
  return out;
}

Trajectory parse_jsonl(const std::string& text) {
  const std::string w = "trajectory";
  Trajectory t;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const ojson j = detail::parse_document(line, w + " line " + std::to_string(lineno));
    const std::string kind = j.value("kind", std::string());
    if (!have_header) {
      if (kind != "header") throw ConfigError("trajectory: first line must be the header");
      detail::check_schema_version(j, w);
      t.header.level = detail::get<std::string>(j, "level", w);
      t.header.seed = detail::get<std::uint64_t>(j, "seed", w);
      t.header.action_interval = detail::get<int>(j, "action_interval", w);
      t.header.source = detail::get<std::string>(j, "source", w);
      t.header.agent = j.value("agent", std::string());
      have_header = true;
      continue;
    }
    if (kind == "footer") {
      TrajectoryFooter f;
      f.final_tick = detail::get<Ticks>(j, "final_tick", w);
      f.final_digest = unhex(detail::get<std::string>(j, "final_digest", w));
      f.score = detail::get<double>(j, "score", w);
      f.valid_actions = detail::get<std::int64_t>(j, "valid_actions", w);
      f.total_actions = detail::get<std::int64_t>(j, "total_actions", w);
      f.done = detail::get<bool>(j, "done", w);
      t.footer = f;
      continue;
    }
    TrajectoryRecord r;
    r.t = detail::get<Ticks>(j, "t", w);
    r.observation_digest = unhex(detail::get<std::string>(j, "observation_digest", w));
    const auto& a = detail::require(j, "action", w);
    if (!a.is_array() || a.size() != 3) throw ConfigError("trajectory: action must be [x, y, c]");
    r.action = {a[0].get<double>(), a[1].get<double>(), a[2].get<int>()};
    r.reward = detail::get<double>(j, "reward", w);
    r.done = detail::get<bool>(j, "done", w);
    r.error_code = detail::get<int>(j, "error_code", w);
    t.records.push_back(r);
  }
  if (!have_header) throw ConfigError("trajectory: empty file");
  return t;
}

void save_trajectory(const Trajectory& t, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw EnvError("cannot write " + path.string());
  out << to_jsonl(t);
}

Trajectory load_trajectory(const std::filesystem::path& path) {
  return parse_jsonl(detail::read_text_file(path));
}

ReplayReport replay(const Trajectory& t, const std::filesystem::path& config_dir) {
  const EntityCatalog catalog = load_catalog(config_dir / "catalog");
  const LevelConfig level = load_level(resolve_level_path(t.header.level, config_dir));
  return replay(t, level, catalog);
}

ReplayReport replay(const Trajectory& t, const LevelConfig& level, const EntityCatalog& catalog) {
  EnvOptions opts;
  opts.action_interval = t.header.action_interval;
  opts.modalities = {};
  Environment env(std::make_shared<const LevelConfig>(level),
                  std::make_shared<const EntityCatalog>(catalog), opts);
  env.reset(t.header.seed);

  ReplayReport rep;
  const auto diverge = [&](const std::string& what) {
    if (rep.identical) {
      rep.identical = false;
      rep.mismatch = what;
    }
  };
  const auto run_to = [&](Ticks target) -> double {
    if (env.done() || target <= env.state().step_index) return 0.0;
    return static_cast<double>(-env.advance(target - env.state().step_index));
  };

  double lead_in = 0.0;
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    const auto& r = t.records[i];
    const double gained = run_to(r.t);
    if (i == 0) lead_in = gained;
    else rep.score += gained;
    if (i > 0) {
      const auto& prev = t.records[i - 1];
      if (gained != prev.reward)
        diverge("record " + std::to_string(i - 1) + ": reward " + std::to_string(gained) +
                " != recorded " + std::to_string(prev.reward));
      if (env.done() != prev.done) diverge("record " + std::to_string(i - 1) + ": done flag differs");
    }
    if (env.state().step_index != r.t || env.done()) {
      diverge("record " + std::to_string(i) + ": episode ended before tick " + std::to_string(r.t));
      break;
    }
    if (fnv1a64(env.observe_text()) != r.observation_digest)
      diverge("record " + std::to_string(i) + " (t=" + std::to_string(r.t) + "): observation differs");
    const int code = env.apply(r.action);
    ++rep.total_actions;
    if (code == kOk) ++rep.valid_actions;
    if (code != r.error_code)
      diverge("record " + std::to_string(i) + ": error code " + std::to_string(code) +
              " != recorded " + std::to_string(r.error_code));
  }
  rep.score += lead_in;

  const Ticks end = t.footer ? t.footer->final_tick
                             : (t.records.empty() ? 0 : t.records.back().t + t.header.action_interval);
  const double tail = run_to(end);
  rep.score += tail;
  if (!t.records.empty()) {
    const auto& last = t.records.back();
    if (tail != last.reward)
      diverge("record " + std::to_string(t.records.size() - 1) + ": reward " + std::to_string(tail) +
              " != recorded " + std::to_string(last.reward));
    if (env.done() != last.done)
      diverge("record " + std::to_string(t.records.size() - 1) + ": done flag differs");
  }
  rep.final_tick = env.state().step_index;
  if (t.footer) {
    if (rep.final_tick != t.footer->final_tick) diverge("final tick differs");
    if (fnv1a64(env.observe_text()) != t.footer->final_digest) diverge("final observation differs");
    if (rep.score != t.footer->score) diverge("score differs");
  }
  return rep;
}

}  // namespace tdenv
