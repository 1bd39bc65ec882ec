#pragma once

#include "json_util.hpp"
#include "tdenv/observation.hpp"

namespace tdenv::detail {

/// The textual observation as a JSON document with keys in display order.
ojson observation_document(const Snapshot& snap, const LevelConfig& level,
                           const EntityCatalog& catalog);

}  // namespace tdenv::detail
