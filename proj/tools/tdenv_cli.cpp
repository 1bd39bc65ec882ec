#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "tdenv/difficulty.hpp"
#include "tdenv/editor.hpp"
#include "tdenv/env.hpp"
#include "tdenv/errors.hpp"
#include "tdenv/features.hpp"
#include "tdenv/harness.hpp"
#include "tdenv/protocol.hpp"
#include "tdenv/wrappers.hpp"

using namespace tdenv;
namespace fs = std::filesystem;

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << text;
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

int cmd_difficulty(const fs::path& config, const std::string& level_ref) {
  const auto catalog = load_catalog(config / "catalog");
  const auto level = load_level(resolve_level_path(level_ref, config));
  const auto d = difficulty(level, catalog);
  std::cout << level.name << ": D = " << fixed(d.total, 2) << "\n"
            << "  road      " << fixed(d.road, 4) << "\n"
            << "  tower     " << fixed(d.tower, 4) << "\n"
            << "  enemy     " << fixed(d.enemy, 4) << "\n"
            << "  resource  " << fixed(d.resource, 4) << "\n";
  return 0;
}

int cmd_validate(const fs::path& file) {
  const auto level = load_level(file);
  std::cout << file.string() << ": ok (" << level.roads.size() << " roads, "
            << level.tower_points.size() << " tower points, " << level.total_waves() << " waves)\n";
  return 0;
}

int cmd_replay(const fs::path& config, const fs::path& file) {
  const Trajectory t = load_trajectory(file);
  const ReplayReport r = replay(t, config);
  std::cout << "level " << t.header.level << " seed " << t.header.seed << "\n"
            << "score " << fixed(r.score, 2) << "\n"
            << "valid_actions " << r.valid_actions << "/" << r.total_actions << "\n"
            << "final_tick " << r.final_tick << "\n"
            << (r.identical ? "replay identical" : "replay MISMATCH: " + r.mismatch) << "\n";
  return r.identical ? 0 : 2;
}

int cmd_render(const fs::path& config, const std::string& level_ref, std::uint64_t seed,
               Ticks ticks, const fs::path& out, bool small) {
  Environment env = Environment::from_config(level_ref, config);
  env.reset(seed);
  env.advance(ticks);
  const PixelFrame f = render_pixels(env.state(), env.level(), env.catalog());
  if (small) {
    const auto rgb = downsample_frame(f);
    write_png(out.string(), rgb.data(), PixelFrame::kWidth / 4, PixelFrame::kHeight / 4);
  } else {
    write_png(out.string(), f.rgb.data(), PixelFrame::kWidth, PixelFrame::kHeight);
  }
  std::cout << "wrote " << out.string() << " at tick " << env.state().step_index << "\n";
  return 0;
}

int cmd_record_human(const fs::path& config, const std::string& state) {
  EnvFeatures f = load_env_features(config);
  if (state == "on") f.human_trajectory_recording = true;
  else if (state == "off") f.human_trajectory_recording = false;
  else if (state != "status") throw std::invalid_argument("expected on, off or status");
  if (state != "status") save_env_features(config, f);
  std::cout << "human trajectory recording: " << (f.human_trajectory_recording ? "on" : "off")
            << " (" << trajectory_dir(f).string() << ")\n";
  return 0;
}

int cmd_report(const std::vector<fs::path>& files, const std::string& agent) {
  std::vector<EpisodeRecord> episodes;
  std::optional<Report> merged;
  for (const auto& f : files) {
    if (f.extension() == ".jsonl") {
      episodes.push_back(episode_from_trajectory(load_trajectory(f)));
    } else {
      Report r = report_from_json(read_file(f));
      for (auto& e : r.episodes) episodes.push_back(std::move(e));
    }
  }
  std::cout << report_table(summarize(agent, std::move(episodes)));
  return 0;
}

int cmd_baselines() {
  std::cout << "level  human_score  human_rate  min_score  min_rate\n";
  for (const auto& b : human_baselines())
    std::cout << std::left << std::setw(7) << b.level << std::right << std::setw(11)
              << fixed(b.human_score, 2) << std::setw(12) << fixed(b.human_rate, 2) << std::setw(11)
              << fixed(b.min_score, 2) << std::setw(10) << fixed(b.min_rate, 2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tdenv: headless tower-defense environment"};
  app.require_subcommand(1);
  std::string config_dir = default_config_dir().string();
  app.add_option("--config-dir", config_dir, "Config directory (env TDENV_CONFIG_DIR)");

  auto* run = app.add_subcommand("run", "Run an agent on levels and report");
  std::vector<std::string> run_levels{"Lv1", "Lv2", "Lv3", "Lv4", "Lv5"};
  std::uint64_t run_seed = 0;
  std::size_t run_episodes = 5, run_threads = 0;
  std::string run_agent_name = "random", run_out;
  std::string run_record;
  std::int64_t run_max_steps = 100000;
  run->add_option("--level", run_levels, "Level names or files")->expected(1, -1);
  run->add_option("--seed", run_seed, "First seed");
  run->add_option("--episodes", run_episodes, "Episodes per level")->check(CLI::PositiveNumber);
  run->add_option("--agent", run_agent_name, "random or noop");
  run->add_option("--record", run_record, "Directory for per-episode trajectories");
  run->add_option("--threads", run_threads, "Worker threads (0: all cores)");
  run->add_option("--max-steps", run_max_steps, "Decision cap per episode");
  run->add_option("--out", run_out, "Write the JSON report here");

  auto* serve = app.add_subcommand("serve", "Serve the session protocol (stdio unless --port)");
  int serve_port = -1;
  serve->add_option("--port", serve_port, "TCP port on 127.0.0.1 (0 picks one)");

  auto* diff = app.add_subcommand("difficulty", "Print the difficulty metric of a level");
  std::string diff_level;
  diff->add_option("level,--level", diff_level, "Level name or file")->required();

  auto* validate = app.add_subcommand("validate-level", "Validate a level file");
  std::string validate_file;
  validate->add_option("file", validate_file)->required();

  auto* rep = app.add_subcommand("replay", "Replay a trajectory and check it matches");
  std::string replay_file;
  rep->add_option("file", replay_file)->required();

  auto* render = app.add_subcommand("render-frame", "Dump a pixel frame as PNG");
  std::string render_level = "Lv1", render_out = "frame.png";
  std::uint64_t render_seed = 0;
  Ticks render_ticks = 0;
  bool render_small = false;
  render->add_option("--level", render_level);
  render->add_option("--seed", render_seed);
  render->add_option("--ticks", render_ticks, "Ticks to simulate first");
  render->add_option("--out", render_out);
  render->add_flag("--downsample", render_small, "128 x 128 instead of 512 x 512");

  auto* human = app.add_subcommand("record-human", "Toggle human trajectory recording");
  std::string human_state = "status";
  human->add_option("state", human_state, "on, off or status")->check(CLI::IsMember({"on", "off", "status"}));

  auto* report = app.add_subcommand("report", "Summarise report files or trajectories");
  std::vector<std::string> report_files;
  std::string report_agent = "agent";
  report->add_option("files", report_files)->required()->expected(1, -1);
  report->add_option("--agent", report_agent, "Agent label for trajectory input");

  auto* baseline = app.add_subcommand("baseline", "Human baselines");
  baseline->require_subcommand(1);
  baseline->add_subcommand("show", "Print the human baselines");

  auto* import = app.add_subcommand("editor-import", "Convert an editor export into a level file");
  std::string import_in, import_out;
  import->add_option("file", import_in)->required();
  import->add_option("--out", import_out, "Level file to write (stdout if absent)");

  auto* exportc = app.add_subcommand("editor-export", "Write a level in the editor export schema");
  std::string export_level;
  exportc->add_option("level", export_level)->required();

  CLI11_PARSE(app, argc, argv);
  const fs::path config(config_dir);

  try {
    if (*run) {
      RunOptions o;
      o.config_dir = config;
      o.threads = run_threads;
      o.max_steps = run_max_steps;
      if (!run_record.empty()) o.record_dir = fs::path(run_record);
      std::vector<std::uint64_t> seeds;
      for (std::size_t i = 0; i < run_episodes; ++i) seeds.push_back(run_seed + i);
      const Report r = run_agent(builtin_agent(run_agent_name), run_levels, seeds, o);
      if (!run_out.empty()) write_file(run_out, report_json(r));
      std::cout << report_table(r);
      return r.notices.empty() ? 0 : 3;
    }
    if (*serve) {
      ProtocolServer server(ServerOptions{config, {}});
      if (serve_port < 0) {
        serve_stream(server, std::cin, std::cout);
        return 0;
      }
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      serve_tcp(server, serve_port, g_stop, [](int port) {
        std::cerr << "listening on 127.0.0.1:" << port << std::endl;
      });
      return 0;
    }
    if (*diff) return cmd_difficulty(config, diff_level);
    if (*validate) return cmd_validate(validate_file);
    if (*rep) return cmd_replay(config, replay_file);
    if (*render) return cmd_render(config, render_level, render_seed, render_ticks, render_out, render_small);
    if (*human) return cmd_record_human(config, human_state);
    if (*report) return cmd_report({report_files.begin(), report_files.end()}, report_agent);
    if (*baseline) return cmd_baselines();
    if (*import) {
      const LevelConfig l = import_editor_export(read_file(import_in));
      const std::string doc = level_to_json(l) + "\n";
      if (import_out.empty()) std::cout << doc;
      else write_file(import_out, doc);
      return 0;
    }
    if (*exportc) {
      std::cout << export_editor_document(load_level(resolve_level_path(export_level, config))) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
