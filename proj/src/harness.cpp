#include "tdenv/harness.hpp"

#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "detail/json_util.hpp"
#include "tdenv/errors.hpp"
#include "tdenv/thread_pool.hpp"

namespace tdenv {

using detail::ojson;

EpisodeRecord run_episode(Environment& env, Agent& agent, std::uint64_t seed,
                          const PromptOptions& prompt, std::int64_t max_steps,
                          TrajectoryRecorder* recorder) {
  EpisodeRecord rec;
  rec.seed = seed;
  rec.level = env.level().name;
  env.reset(seed);
  agent.begin_episode(seed);

  std::string obs = env.observe_text();
  std::vector<PromptHistoryItem> history(prompt.history_length, PromptHistoryItem{obs, noop_action()});

  for (std::int64_t step = 0; !env.done(); ++step) {
    if (step >= max_steps) {
      rec.truncated = true;
      break;
    }
    AgentInput in{env, history, obs, {}};
    if (agent.wants_prompt()) in.prompt = build_prompt(obs, history, env.level(), env.catalog(), prompt);
    const std::optional<Action> chosen = agent.act(in);
    const Action a = chosen.value_or(noop_action());
    const Ticks t = env.state().step_index;
    const StepResult r = env.step(a);
    const int code = chosen ? r.info.action.error_code : kParseFailureCode;
    if (recorder) {
      recorder->record(t, obs, a, r.info.action.error_code);
      recorder->add_outcome(r.reward, r.done);
    }
    rec.error_codes.push_back(code);
    ++rec.total_action_count;
    if (code == kOk) ++rec.valid_action_count;
    if (!chosen) ++rec.parse_failures;
    rec.score += r.reward;
    if (prompt.history_length > 0) {
      history.erase(history.begin());
      history.push_back({obs, a});
    }
    obs = r.observation.text.empty() ? env.observe_text() : r.observation.text;
  }
  rec.final_tick = env.state().step_index;
  rec.cleared = env.done() && env.state().base_health > 0;
  if (recorder) recorder->finish(rec.final_tick, obs, env.done());
  return rec;
}

Report summarize(const std::string& agent, std::vector<EpisodeRecord> episodes) {
  Report rep;
  rep.agent = agent;
  std::vector<std::string> order;
  std::map<std::string, std::vector<const EpisodeRecord*>> by_level;
  for (const auto& e : episodes) {
    if (!by_level.count(e.level)) order.push_back(e.level);
    by_level[e.level].push_back(&e);
  }
  for (const auto& level : order) {
    LevelSummary s;
    s.level = level;
    std::vector<double> scores, rates, nscores, nrates;
    const BaselineEntry* base = nullptr;
    try {
      base = &baseline_for(level);
    } catch (const std::out_of_range&) {
    }
    for (const EpisodeRecord* e : by_level[level]) {
      ++s.episodes;
      if (e->failed) {
        ++s.failed;
        continue;
      }
      if (e->total_action_count == 0) {
        rep.notices.push_back(level + " seed " + std::to_string(e->seed) +
                              ": no actions taken, rate undefined; excluded");
        ++s.failed;
        continue;
      }
      scores.push_back(e->score);
      rates.push_back(valid_action_rate(*e));
      if (base) {
        nscores.push_back(normalize(e->score, base->human_score, base->min_score));
        nrates.push_back(normalize(rates.back(), base->human_rate, base->min_rate));
      }
    }
    s.score = mean_se(scores);
    s.rate = mean_se(rates);
    if (base) {
      s.normalized_score = mean_se(nscores);
      s.normalized_rate = mean_se(nrates);
    }
    rep.levels.push_back(s);
  }
  for (const auto& e : episodes)
    if (e.failed)
      rep.notices.push_back(e.level + " seed " + std::to_string(e.seed) + " failed: " + e.failure);
  rep.episodes = std::move(episodes);
  return rep;
}

Report run_agent(const AgentFactory& factory, const std::vector<std::string>& levels,
                 const std::vector<std::uint64_t>& seeds, const RunOptions& options) {
  if (seeds.empty()) throw std::invalid_argument("run_agent needs at least one seed");
  if (levels.empty()) throw std::invalid_argument("run_agent needs at least one level");
  const auto catalog =
      std::make_shared<const EntityCatalog>(load_catalog(options.config_dir / "catalog"));
  std::vector<std::shared_ptr<const LevelConfig>> loaded;
  for (const auto& l : levels)
    loaded.push_back(std::make_shared<const LevelConfig>(
        load_level(resolve_level_path(l, options.config_dir))));

  const std::string agent_name = factory()->name();
  std::vector<EpisodeRecord> episodes(levels.size() * seeds.size());
  EnvOptions env_opts;
  env_opts.action_interval = options.action_interval;
  ThreadPool pool(options.threads);
  pool.parallel_for(episodes.size(), [&](std::size_t k) {
    const std::size_t li = k / seeds.size();
    const std::uint64_t seed = seeds[k % seeds.size()];
    EpisodeRecord& out = episodes[k];
    try {
      Environment env(loaded[li], catalog, env_opts);
      auto agent = factory();
      std::unique_ptr<TrajectoryRecorder> recorder;
      if (options.record_dir)
        recorder = std::make_unique<TrajectoryRecorder>(
            TrajectoryHeader{levels[li], seed, options.action_interval, "agent", agent_name});
      out = run_episode(env, *agent, seed, options.prompt, options.max_steps, recorder.get());
      if (recorder)
        save_trajectory(recorder->trajectory(),
                        *options.record_dir /
                            (agent_name + "_" + levels[li] + "_" + std::to_string(seed) + ".jsonl"));
    } catch (const std::exception& e) {
      out = EpisodeRecord{};
      out.seed = seed;
      out.failed = true;
      out.failure = e.what();
    }
    out.level = levels[li];
  });
  return summarize(agent_name, std::move(episodes));
}

namespace {

ojson mean_se_json(const MeanSe& m) { return {{"mean", m.mean}, {"se", m.se}, {"n", m.n}}; }

MeanSe mean_se_from(const ojson& j) {
  return {j.at("mean").get<double>(), j.at("se").get<double>(), j.at("n").get<std::size_t>()};
}

std::string fmt(const MeanSe& m) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f ± %.2f", m.mean, m.se);
  return buf;
}

}  // namespace

std::string report_json(const Report& r) {
  ojson j = ojson::object();
  j["schema_version"] = 1;
  j["agent"] = r.agent;
  ojson levels = ojson::array();
  for (const auto& s : r.levels) {
    ojson l = ojson::object();
    l["level"] = s.level;
    l["episodes"] = s.episodes;
    l["failed"] = s.failed;
    l["score"] = mean_se_json(s.score);
    l["valid_action_rate"] = mean_se_json(s.rate);
    if (s.normalized_score) l["normalized_score"] = mean_se_json(*s.normalized_score);
    if (s.normalized_rate) l["normalized_valid_action_rate"] = mean_se_json(*s.normalized_rate);
    levels.push_back(std::move(l));
  }
  j["levels"] = std::move(levels);
  ojson eps = ojson::array();
  for (const auto& e : r.episodes) {
    ojson o = ojson::object();
    o["level"] = e.level;
    o["seed"] = e.seed;
    o["score"] = e.score;
    o["valid_actions"] = e.valid_action_count;
    o["total_actions"] = e.total_action_count;
    o["parse_failures"] = e.parse_failures;
    o["final_tick"] = e.final_tick;
    o["cleared"] = e.cleared;
    o["truncated"] = e.truncated;
    if (e.failed) o["failure"] = e.failure;
    eps.push_back(std::move(o));
  }
  j["episodes"] = std::move(eps);
  j["notices"] = r.notices;
  return j.dump(2);
}

Report report_from_json(const std::string& text) {
  const ojson j = detail::parse_document(text, "report");
  detail::check_schema_version(j, "report");
  Report r;
  r.agent = j.value("agent", std::string());
  for (const auto& l : j.at("levels")) {
    LevelSummary s;
    s.level = l.at("level").get<std::string>();
    s.episodes = l.at("episodes").get<std::size_t>();
    s.failed = l.at("failed").get<std::size_t>();
    s.score = mean_se_from(l.at("score"));
    s.rate = mean_se_from(l.at("valid_action_rate"));
    if (l.contains("normalized_score")) s.normalized_score = mean_se_from(l.at("normalized_score"));
    if (l.contains("normalized_valid_action_rate"))
      s.normalized_rate = mean_se_from(l.at("normalized_valid_action_rate"));
    r.levels.push_back(s);
  }
  for (const auto& o : j.value("episodes", ojson::array())) {
    EpisodeRecord e;
    e.level = o.at("level").get<std::string>();
    e.seed = o.at("seed").get<std::uint64_t>();
    e.score = o.at("score").get<double>();
    e.valid_action_count = o.at("valid_actions").get<std::int64_t>();
    e.total_action_count = o.at("total_actions").get<std::int64_t>();
    e.parse_failures = o.value("parse_failures", std::int64_t{0});
    e.final_tick = o.value("final_tick", Ticks{0});
    e.cleared = o.value("cleared", false);
    e.truncated = o.value("truncated", false);
    if (o.contains("failure")) {
      e.failed = true;
      e.failure = o.at("failure").get<std::string>();
    }
    r.episodes.push_back(e);
  }
  for (const auto& n : j.value("notices", ojson::array())) r.notices.push_back(n.get<std::string>());
  return r;
}

std::string report_table(const Report& r) {
  std::ostringstream out;
  out << "agent: " << r.agent << "\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-8s %4s %16s %16s %16s %16s\n", "level", "n", "score", "rate",
                "norm. score", "norm. rate");
  out << line;
  for (const auto& s : r.levels) {
    std::snprintf(line, sizeof line, "%-8s %4zu %16s %16s %16s %16s\n", s.level.c_str(),
                  s.episodes - s.failed, fmt(s.score).c_str(), fmt(s.rate).c_str(),
                  s.normalized_score ? fmt(*s.normalized_score).c_str() : "-",
                  s.normalized_rate ? fmt(*s.normalized_rate).c_str() : "-");
    out << line;
  }
  for (const auto& n : r.notices) out << "note: " << n << "\n";
  return out.str();
}

EpisodeRecord episode_from_trajectory(const Trajectory& t) {
  EpisodeRecord e;
  e.level = t.header.level;
  e.seed = t.header.seed;
  for (const auto& r : t.records) {
    e.error_codes.push_back(r.error_code);
    ++e.total_action_count;
    if (r.error_code == kOk) ++e.valid_action_count;
  }
  if (t.footer) {
    e.score = t.footer->score;
    e.final_tick = t.footer->final_tick;
  } else {
    for (const auto& r : t.records) e.score += r.reward;
  }
  return e;
}

}  // namespace tdenv
