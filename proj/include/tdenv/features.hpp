#pragma once

#include <filesystem>
#include <string>

namespace tdenv {

/// Environment feature toggles from env_config.json.
struct EnvFeatures {
  bool debug_mode = false;
  bool human_trajectory_recording = false;
  bool action_discretization_preview = false;
  std::string trajectory_dir = "trajectories";  // relative to the working directory
};

EnvFeatures load_env_features(const std::filesystem::path& config_dir);
void save_env_features(const std::filesystem::path& config_dir, const EnvFeatures& f);

std::filesystem::path trajectory_dir(const EnvFeatures& f);

}  // namespace tdenv
