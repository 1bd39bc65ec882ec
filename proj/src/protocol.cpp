#include "tdenv/protocol.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>

#include "detail/json_util.hpp"
#include "tdenv/editor.hpp"
#include "tdenv/env.hpp"
#include "tdenv/errors.hpp"
#include "tdenv/features.hpp"
#include "tdenv/trajectory.hpp"
#include "tdenv/wrappers.hpp"

namespace tdenv {

using detail::ojson;

WallClock steady_wall_clock() {
  return [] {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
  };
}

namespace {

/// Error raised while handling a request; `code` goes on the wire.
struct ProtocolError : std::runtime_error {
  ProtocolError(std::string c, const std::string& msg) : std::runtime_error(msg), code(std::move(c)) {}
  std::string code;
};

const char* const kCommands[] = {"create", "reset",  "step",          "observe",    "render",
                                 "record", "close",  "editor_import", "human_input"};

struct Session {
  std::mutex mu;
  std::unique_ptr<Environment> env;
  std::string level_ref;
  bool human = false;
  double clock_origin = 0.0;  // wall time at reset, human sessions
  std::optional<TrajectoryRecorder> recorder;
  bool closed = false;
};

Modalities parse_modalities(const ojson& payload, const Modalities& fallback) {
  if (!payload.contains("modalities")) return fallback;
  const auto& m = payload.at("modalities");
  if (!m.is_array()) throw ProtocolError("bad_request", "modalities must be an array");
  Modalities out{false, false, false};
  for (const auto& v : m) {
    const std::string s = v.is_string() ? v.get<std::string>() : "";
    if (s == "text") out.text = true;
    else if (s == "structured") out.structured = true;
    else if (s == "pixels") out.pixels = true;
    else throw ProtocolError("bad_request", "unknown modality " + v.dump());
  }
  return out;
}

ojson observation_json(const Observation& o) {
  ojson j = ojson::object();
  if (!o.text.empty()) j["text"] = ojson::parse(o.text);
  if (o.structured.size() > 0)
    j["structured"] = std::vector<double>(o.structured.data(), o.structured.data() + o.structured.size());
  if (o.pixels) {
    const auto png = encode_png(o.pixels->rgb.data(), PixelFrame::kWidth, PixelFrame::kHeight);
    j["pixels_png_base64"] = detail::base64_encode(png);
  }
  return j;
}

Action checked(const Action& a) {
  try {
    check_action(a);
  } catch (const std::invalid_argument& e) {
    throw ProtocolError("bad_request", e.what());
  }
  return a;
}

Action parse_action(const ojson& p) {
  if (p.contains("action") && p.at("action").is_array()) {
    const auto& a = p.at("action");
    if (a.size() != 3 || !a[0].is_number() || !a[1].is_number() || !a[2].is_number_integer())
      throw ProtocolError("bad_request", "action must be [x, y, c]");
    return checked({a[0].get<double>(), a[1].get<double>(), a[2].get<int>()});
  }
  if (!p.contains("x") || !p.contains("y") || !p.contains("action") || !p.at("x").is_number() ||
      !p.at("y").is_number() || !p.at("action").is_number_integer())
    throw ProtocolError("bad_request", "step needs numeric x, y and an integer action");
  return checked({p.at("x").get<double>(), p.at("y").get<double>(), p.at("action").get<int>()});
}

ojson info_json(const StepInfo& i) {
  return {{"step", i.step_index},
          {"time", i.sim_time},
          {"gold", i.gold},
          {"base_health", i.base_health},
          {"wave", i.wave},
          {"error_code", i.action.error_code},
          {"is_success", i.action.is_success}};
}

}  // namespace

struct ProtocolServer::Impl {
  ServerOptions options;
  std::shared_ptr<const EntityCatalog> catalog;
  EnvFeatures features;
  mutable std::mutex mu;
  std::map<std::string, std::shared_ptr<Session>> sessions;
  std::uint64_t next_id = 1;

  std::shared_ptr<Session> find(const std::string& id) {
    std::lock_guard lock(mu);
    auto it = sessions.find(id);
    if (it == sessions.end()) throw ProtocolError("unknown_session", "no session '" + id + "'");
    return it->second;
  }

  double now() const { return options.clock(); }

  /// Human sessions: catch the simulation up with the wall clock.
  void sync(Session& s) {
    if (!s.human || s.env->done()) return;
    const auto target = static_cast<Ticks>(std::floor((now() - s.clock_origin) * kTicksPerSecond));
    const Ticks behind = target - s.env->state().step_index;
    if (behind <= 0) return;
    const std::int64_t lost = s.env->advance(behind);
    if (s.recorder) s.recorder->add_outcome(-static_cast<double>(lost), s.env->done());
  }

  ojson reset_session(Session& s, std::uint64_t seed, bool record) {
    const Observation o = s.env->reset(seed);
    s.clock_origin = now();
    s.recorder.reset();
    if (record)
      s.recorder.emplace(TrajectoryHeader{s.level_ref, seed, s.env->options().action_interval,
                                          s.human ? "human" : "agent", s.human ? "human" : "remote"});
    return observation_json(o);
  }

  std::shared_ptr<const LevelConfig> level_from(const ojson& p) {
    try {
      if (p.contains("level_document")) {
        const auto& d = p.at("level_document");
        return std::make_shared<const LevelConfig>(parse_level(d.is_string() ? d.get<std::string>() : d.dump()));
      }
      const std::string ref = detail::get<std::string>(p, "level", "create");
      return std::make_shared<const LevelConfig>(load_level(resolve_level_path(ref, options.config_dir)));
    } catch (const ConfigError& e) {
      throw ProtocolError("config_error", e.what());
    }
  }

  ojson create(const ojson& p, std::string& session_id) {
    auto s = std::make_shared<Session>();
    EnvOptions eo;
    eo.action_interval = p.value("action_interval", kDefaultActionInterval);
    eo.modalities = parse_modalities(p, Modalities{});
    const std::string mode = p.value("mode", std::string("agent"));
    if (mode != "agent" && mode != "human")
      throw ProtocolError("bad_request", "mode must be agent or human");
    s->human = mode == "human";
    s->level_ref = p.contains("level_document") ? p.value("level_name", std::string("inline"))
                                                : p.value("level", std::string());
    try {
      s->env = std::make_unique<Environment>(level_from(p), catalog, eo);
    } catch (const EnvError& e) {
      throw ProtocolError("bad_request", e.what());
    }
    const bool record = p.value("record", s->human && features.human_trajectory_recording);
    ojson out = ojson::object();
    out["observation"] = reset_session(*s, p.value("seed", std::uint64_t{0}), record);
    out["mode"] = mode;
    out["recording"] = record;
    {
      std::lock_guard lock(mu);
      session_id = "s" + std::to_string(next_id++);
      sessions[session_id] = s;
    }
    out["session_id"] = session_id;
    return out;
  }

  ojson dispatch(const std::string& cmd, const std::string& sid, const ojson& p, std::string& reply_sid) {
    if (cmd == "create") return create(p, reply_sid);
    if (cmd == "editor_import") {
      try {
        const auto& d = detail::require(p, "document", "editor_import");
        const LevelConfig l = import_editor_export(d.is_string() ? d.get<std::string>() : d.dump());
        ojson out = ojson::object();
        out["level"] = ojson::parse(level_to_json(l));
        out["roads"] = l.roads.size();
        out["tower_points"] = l.tower_points.size();
        out["waves"] = l.total_waves();
        return out;
      } catch (const ConfigError& e) {
        throw ProtocolError("config_error", e.what());
      }
    }

    auto s = find(sid);
    std::lock_guard lock(s->mu);
    if (s->closed) throw ProtocolError("unknown_session", "session '" + sid + "' is closed");
    Environment& env = *s->env;

    if (cmd == "reset") {
      const bool record = p.value("record", s->recorder.has_value());
      ojson out = ojson::object();
      out["observation"] = reset_session(*s, p.value("seed", env.seed()), record);
      return out;
    }
    if (cmd == "observe") {
      sync(*s);
      ojson out = ojson::object();
      out["observation"] = observation_json(env.observe(parse_modalities(p, env.options().modalities)));
      out["done"] = env.done();
      return out;
    }
    if (cmd == "step") {
      if (s->human) throw ProtocolError("bad_request", "human sessions take human_input, not step");
      const Action a = parse_action(p);
      if (env.done()) throw ProtocolError("episode_over", "episode is over; send reset");
      const std::string before = s->recorder ? env.observe_text() : std::string();
      const Ticks t = env.state().step_index;
      const StepResult r = env.step(a);
      if (s->recorder) {
        s->recorder->record(t, before, a, r.info.action.error_code);
        s->recorder->add_outcome(r.reward, r.done);
      }
      ojson out = ojson::object();
      out["observation"] = observation_json(r.observation);
      out["reward"] = r.reward;
      out["done"] = r.done;
      out["info"] = info_json(r.info);
      return out;
    }
    if (cmd == "human_input") {
      if (!s->human) throw ProtocolError("bad_request", "human_input is only for human sessions");
      sync(*s);
      if (env.done()) throw ProtocolError("episode_over", "episode is over; send reset");
      const Action a = parse_action(p);
      const Ticks t = env.state().step_index;
      const std::string before = env.observe_text();
      const int code = env.apply(a);
      if (s->recorder) s->recorder->record(t, before, a, code);
      ojson out = ojson::object();
      out["tick"] = t;
      out["error_code"] = code;
      out["observation"] = observation_json(env.observe());
      return out;
    }
    if (cmd == "render") {
      sync(*s);
      const PixelFrame f = render_pixels(env.state(), env.level(), env.catalog());
      const bool small = p.value("downsample", false);
      const int w = small ? PixelFrame::kWidth / 4 : PixelFrame::kWidth;
      const int h = small ? PixelFrame::kHeight / 4 : PixelFrame::kHeight;
      const std::vector<std::uint8_t> rgb = small ? downsample_frame(f) : f.rgb;
      const std::string format = p.value("format", std::string("png"));
      ojson out = ojson::object();
      out["width"] = w;
      out["height"] = h;
      out["format"] = format;
      if (format == "png") out["data"] = detail::base64_encode(encode_png(rgb.data(), w, h));
      else if (format == "raw") out["data"] = detail::base64_encode(rgb);
      else throw ProtocolError("bad_request", "render format must be png or raw");
      return out;
    }
    if (cmd == "record") {
      sync(*s);
      if (!s->recorder) throw ProtocolError("bad_request", "session is not recording");
      TrajectoryRecorder snapshot = *s->recorder;
      snapshot.finish(env.state().step_index, env.observe_text(), env.done());
      std::filesystem::path path = p.contains("path")
                                       ? std::filesystem::path(p.at("path").get<std::string>())
                                       : trajectory_dir(features) / (sid + ".jsonl");
      try {
        save_trajectory(snapshot.trajectory(), path);
      } catch (const EnvError& e) {
        throw ProtocolError("io_error", e.what());
      } catch (const std::filesystem::filesystem_error& e) {
        throw ProtocolError("io_error", e.what());
      }
      ojson out = ojson::object();
      out["path"] = path.string();
      out["records"] = snapshot.trajectory().records.size();
      out["final_tick"] = env.state().step_index;
      return out;
    }
    if (cmd == "close") {
      s->closed = true;
      std::lock_guard reg(mu);
      sessions.erase(sid);
      return ojson{{"closed", true}};
    }
    throw ProtocolError("unknown_command", "unknown command '" + cmd + "'");
  }
};

ProtocolServer::ProtocolServer(ServerOptions options) : impl_(std::make_unique<Impl>()) {
  if (!options.clock) options.clock = steady_wall_clock();
  impl_->options = std::move(options);
  impl_->catalog = std::make_shared<const EntityCatalog>(load_catalog(impl_->options.config_dir / "catalog"));
  impl_->features = load_env_features(impl_->options.config_dir);
}

ProtocolServer::~ProtocolServer() = default;

std::size_t ProtocolServer::session_count() const {
  std::lock_guard lock(impl_->mu);
  return impl_->sessions.size();
}

std::string ProtocolServer::handle_line(const std::string& line) {
  ojson reply = ojson::object();
  reply["schema_version"] = kProtocolVersion;
  reply["id"] = nullptr;
  reply["status"] = "ok";
  reply["session_id"] = nullptr;
  reply["payload"] = ojson::object();
  try {
    const ojson req = ojson::parse(line, nullptr, false);
    if (req.is_discarded() || !req.is_object())
      throw ProtocolError("bad_request", "request is not a JSON object");
    if (req.contains("id")) reply["id"] = req.at("id");
    if (req.contains("session_id")) reply["session_id"] = req.at("session_id");
    if (!req.contains("schema_version") || req.at("schema_version") != kProtocolVersion)
      throw ProtocolError("version_mismatch", "schema_version must be " + std::to_string(kProtocolVersion));
    if (!req.contains("command") || !req.at("command").is_string())
      throw ProtocolError("bad_request", "missing command");
    const std::string cmd = req.at("command").get<std::string>();
    bool known = false;
    for (const char* c : kCommands) known = known || cmd == c;
    if (!known) throw ProtocolError("unknown_command", "unknown command '" + cmd + "'");
    const ojson payload = req.value("payload", ojson::object());
    if (!payload.is_object()) throw ProtocolError("bad_request", "payload must be an object");
    std::string sid;
    if (req.contains("session_id") && req.at("session_id").is_string())
      sid = req.at("session_id").get<std::string>();
    else if (cmd != "create" && cmd != "editor_import")
      throw ProtocolError("bad_request", "command '" + cmd + "' needs a session_id");
    std::string new_sid;
    reply["payload"] = impl_->dispatch(cmd, sid, payload, new_sid);
    if (!new_sid.empty()) reply["session_id"] = new_sid;
  } catch (const ProtocolError& e) {
    reply["status"] = "error";
    reply["error"] = {{"code", e.code}, {"message", e.what()}};
  } catch (const ConfigError& e) {
    reply["status"] = "error";
    reply["error"] = {{"code", "config_error"}, {"message", e.what()}};
  } catch (const std::exception& e) {
    reply["status"] = "error";
    reply["error"] = {{"code", "engine_error"}, {"message", e.what()}};
  }
  return reply.dump();
}

}  // namespace tdenv
