#include "tdenv/features.hpp"

#include <fstream>

#include "detail/json_util.hpp"

namespace tdenv {

namespace {
std::filesystem::path file(const std::filesystem::path& dir) { return dir / "env_config.json"; }
}  // namespace

EnvFeatures load_env_features(const std::filesystem::path& config_dir) {
  const std::string w = "env_config.json";
  const auto doc = detail::parse_document(detail::read_text_file(file(config_dir)), w);
  detail::check_schema_version(doc, w);
  EnvFeatures f;
  f.debug_mode = detail::get_or<bool>(doc, "debug_mode", f.debug_mode, w);
  f.human_trajectory_recording =
      detail::get_or<bool>(doc, "human_trajectory_recording", f.human_trajectory_recording, w);
  f.action_discretization_preview =
      detail::get_or<bool>(doc, "action_discretization_preview", f.action_discretization_preview, w);
  f.trajectory_dir = detail::get_or<std::string>(doc, "trajectory_dir", f.trajectory_dir, w);
  return f;
}

void save_env_features(const std::filesystem::path& config_dir, const EnvFeatures& f) {
  detail::ojson doc = detail::ojson::object();
  doc["schema_version"] = 1;
  doc["debug_mode"] = f.debug_mode;
  doc["human_trajectory_recording"] = f.human_trajectory_recording;
  doc["action_discretization_preview"] = f.action_discretization_preview;
  doc["trajectory_dir"] = f.trajectory_dir;
  std::ofstream out(file(config_dir), std::ios::binary);
  if (!out) throw ConfigError("cannot write " + file(config_dir).string());
  out << doc.dump(2) << "\n";
}

std::filesystem::path trajectory_dir(const EnvFeatures& f) { return f.trajectory_dir; }

}  // namespace tdenv
