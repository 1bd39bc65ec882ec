#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>

namespace tdenv {

using Vec2 = Eigen::Vector2d;

/// The playable map is the square [-3, 3] x [-3, 3] centred on the origin.
inline constexpr double kMapHalfExtent = 3.0;
inline constexpr double kMapSideLength = 2.0 * kMapHalfExtent;

/// Tower points are 0.5 x 0.5 squares around their centre.
inline constexpr double kTowerBoxSide = 0.5;

inline bool in_map(const Vec2& p, double eps = 0.0) {
  return std::abs(p.x()) <= kMapHalfExtent + eps && std::abs(p.y()) <= kMapHalfExtent + eps;
}

inline Vec2 clamp_to_map(const Vec2& p) {
  return {std::clamp(p.x(), -kMapHalfExtent, kMapHalfExtent),
          std::clamp(p.y(), -kMapHalfExtent, kMapHalfExtent)};
}

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Max-norm membership: |dx| <= half_side and |dy| <= half_side.
inline bool in_square(const Vec2& center, double side, const Vec2& p) {
  const double h = 0.5 * side;
  return std::abs(p.x() - center.x()) <= h && std::abs(p.y() - center.y()) <= h;
}

/// Axis-aligned rectangle membership.
inline bool in_rect(const Vec2& center, double width, double height, const Vec2& p) {
  return std::abs(p.x() - center.x()) <= 0.5 * width && std::abs(p.y() - center.y()) <= 0.5 * height;
}

/// Does the disc (c, r) touch the axis-aligned rectangle?
inline bool disc_overlaps_rect(const Vec2& rect_center, double width, double height, const Vec2& c,
                               double r) {
  const double dx = std::max(std::abs(c.x() - rect_center.x()) - 0.5 * width, 0.0);
  const double dy = std::max(std::abs(c.y() - rect_center.y()) - 0.5 * height, 0.0);
  return dx * dx + dy * dy <= r * r;
}

/// Moves `from` toward `to` by at most `step`; returns true when `to` was reached.
inline constexpr double kArrivalTolerance = 1e-9;

inline bool step_toward(Vec2& from, const Vec2& to, double step) {
  const Vec2 delta = to - from;
  const double d = delta.norm();
  if (d <= step + kArrivalTolerance) {
    from = to;
    return true;
  }
  from += delta * (step / d);
  return false;
}

}  // namespace tdenv
