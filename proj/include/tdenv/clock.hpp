#pragma once

#include <cmath>
#include <cstdint>

namespace tdenv {

/// Fixed simulation timestep: 0.02 s, i.e. 50 ticks per simulated second.
inline constexpr double kTickSeconds = 0.02;
inline constexpr int kTicksPerSecond = 50;

/// Default number of ticks between consecutive agent actions.
inline constexpr int kDefaultActionInterval = 16;

using Ticks = std::int64_t;

/// Every per-second quantity in the configuration is integrated in whole ticks.
inline Ticks to_ticks(double seconds) { return std::llround(seconds * kTicksPerSecond); }

inline double to_seconds(Ticks ticks) { return static_cast<double>(ticks) * kTickSeconds; }

/// Whole seconds remaining, rounded up (a 0.3 s timer reads 1).
inline std::int64_t ceil_seconds(Ticks ticks) {
  return ticks <= 0 ? 0 : (ticks + kTicksPerSecond - 1) / kTicksPerSecond;
}

}  // namespace tdenv
