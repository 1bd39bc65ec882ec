#pragma once

#include <string>

#include "tdenv/level.hpp"

namespace tdenv {

/// Converts a level editor export into a validated LevelConfig. Missing
/// assembly points default to the nearest road point; missing gameplay
/// settings take the editor defaults. Throws ConfigError on schema mismatch
/// or out-of-bounds coordinates.
LevelConfig import_editor_export(const std::string& document);

/// Serialises a level in the editor export schema. Importing the result and
/// exporting again yields identical bytes.
std::string export_editor_document(const LevelConfig& level);

/// Closest point to `p` on any road segment.
Vec2 nearest_road_point(const LevelConfig& level, const Vec2& p);

}  // namespace tdenv
