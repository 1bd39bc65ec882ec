#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "tdenv/observation.hpp"

namespace tdenv {
namespace {

using Rgb = std::array<std::uint8_t, 3>;

constexpr Rgb kGrass{58, 104, 62};
constexpr Rgb kRoad{152, 122, 84};
constexpr Rgb kDestination{170, 30, 30};
constexpr Rgb kTowerPoint{120, 120, 120};
constexpr Rgb kKnightTower{60, 80, 200};
constexpr Rgb kMagicianTower{150, 60, 200};
constexpr Rgb kArcherTower{30, 150, 60};
constexpr Rgb kFrozen{150, 205, 250};
constexpr Rgb kRange{240, 220, 60};
constexpr Rgb kAssembly{40, 60, 160};
constexpr Rgb kGroundEnemy{210, 40, 40};
constexpr Rgb kFlyingEnemy{240, 120, 30};
constexpr Rgb kKnight{80, 140, 250};
constexpr Rgb kHero{250, 200, 40};
constexpr Rgb kHeroOutline{60, 40, 10};
constexpr Rgb kFire{230, 80, 20};
constexpr Rgb kGold{250, 215, 0};
constexpr Rgb kFog{255, 255, 255};
constexpr Rgb kHudPanel{225, 225, 225};
constexpr Rgb kHudText{20, 20, 20};

constexpr double kPxPerUnit = PixelFrame::kWidth / kMapSideLength;

class Canvas {
 public:
  explicit Canvas(PixelFrame& f) : f_(f) {}

  void put(int x, int y, const Rgb& c) {
    if (x < 0 || y < 0 || x >= PixelFrame::kWidth || y >= PixelFrame::kHeight) return;
    std::copy(c.begin(), c.end(), f_.at(x, y));
  }

  /// Pixels whose centres fall inside the map-space rectangle.
  void fill_rect(const Vec2& centre, double w, double h, const Rgb& c) {
    const double x0 = to_pixel_x(centre.x() - 0.5 * w), x1 = to_pixel_x(centre.x() + 0.5 * w);
    const double y0 = to_pixel_y(centre.y() + 0.5 * h), y1 = to_pixel_y(centre.y() - 0.5 * h);
    for (int y = first(y0); y < PixelFrame::kHeight && y + 0.5 < y1; ++y)
      for (int x = first(x0); x < PixelFrame::kWidth && x + 0.5 < x1; ++x) put(x, y, c);
  }

  void fill_circle(const Vec2& centre, double r, const Rgb& c) {
    shade(centre, r, [&](double d2, double rp) { return d2 <= rp * rp; }, c);
  }

  void ring(const Vec2& centre, double r, double thickness_px, const Rgb& c) {
    shade(centre, r + thickness_px / kPxPerUnit,
          [&](double d2, double rp) {
            const double d = std::sqrt(d2);
            return d <= rp && d >= rp - thickness_px;
          },
          c);
  }

  void triangle(const Vec2& centre, double r, const Rgb& c) {
    const double cx = to_pixel_x(centre.x()), cy = to_pixel_y(centre.y()), rp = r * kPxPerUnit;
    for (int y = first(cy - rp); y < cy + rp; ++y)
      for (int x = first(cx - rp); x < cx + rp; ++x) {
        const double fy = (y + 0.5 - (cy - rp)) / (2 * rp);  // 0 at apex
        if (std::abs(x + 0.5 - cx) <= fy * rp) put(x, y, c);
      }
  }

  void thick_line(const Vec2& a, const Vec2& b, double width, const Rgb& c) {
    const Eigen::Vector2d pa(to_pixel_x(a.x()), to_pixel_y(a.y()));
    const Eigen::Vector2d pb(to_pixel_x(b.x()), to_pixel_y(b.y()));
    const double hw = 0.5 * width * kPxPerUnit;
    const Eigen::Vector2d lo = pa.cwiseMin(pb).array() - hw, hi = pa.cwiseMax(pb).array() + hw;
    const Eigen::Vector2d ab = pb - pa;
    const double len2 = std::max(ab.squaredNorm(), 1e-12);
    for (int y = first(lo.y()); y < hi.y(); ++y)
      for (int x = first(lo.x()); x < hi.x(); ++x) {
        const Eigen::Vector2d p(x + 0.5, y + 0.5);
        const double t = std::clamp((p - pa).dot(ab) / len2, 0.0, 1.0);
        if ((pa + t * ab - p).squaredNorm() <= hw * hw) put(x, y, c);
      }
  }

  void pixel_box(int x0, int y0, int w, int h, const Rgb& c) {
    for (int y = y0; y < y0 + h; ++y)
      for (int x = x0; x < x0 + w; ++x) put(x, y, c);
  }

 private:
  static int first(double v) { return std::max(0, static_cast<int>(std::ceil(v - 0.5))); }

  template <typename Pred>
  void shade(const Vec2& centre, double r, Pred inside, const Rgb& c) {
    const double cx = to_pixel_x(centre.x()), cy = to_pixel_y(centre.y()), rp = r * kPxPerUnit;
    for (int y = first(cy - rp); y < cy + rp; ++y)
      for (int x = first(cx - rp); x < cx + rp; ++x) {
        const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
        if (inside(dx * dx + dy * dy, rp)) put(x, y, c);
      }
  }

  PixelFrame& f_;
};

// 3x5 digit glyphs, one row per 3 bits.
constexpr std::array<std::array<std::uint8_t, 5>, 10> kDigits = {{
    {7, 5, 5, 5, 7}, {2, 6, 2, 2, 7}, {7, 1, 7, 4, 7}, {7, 1, 7, 1, 7}, {5, 5, 7, 1, 1},
    {7, 4, 7, 1, 7}, {7, 4, 7, 5, 7}, {7, 1, 1, 1, 1}, {7, 5, 7, 5, 7}, {7, 5, 7, 1, 7},
}};
constexpr int kGlyphScale = 3;
constexpr int kGlyphAdvance = 4 * kGlyphScale;

int text_width(const std::string& digits) {
  return static_cast<int>(digits.size()) * kGlyphAdvance - kGlyphScale;
}

void draw_digits(Canvas& cv, int x0, int y0, const std::string& digits) {
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const auto& g = kDigits[static_cast<std::size_t>(digits[i] - '0')];
    for (int row = 0; row < 5; ++row)
      for (int col = 0; col < 3; ++col)
        if (g[static_cast<std::size_t>(row)] & (4 >> col))
          cv.pixel_box(x0 + static_cast<int>(i) * kGlyphAdvance + col * kGlyphScale,
                       y0 + row * kGlyphScale, kGlyphScale, kGlyphScale, kHudText);
  }
}

/// Icon swatch plus number on a light panel; `right`/`bottom` pick the corner.
void hud_counter(Canvas& cv, bool right, bool bottom, const Rgb& icon, std::int64_t value) {
  const std::string digits = std::to_string(std::max<std::int64_t>(value, 0));
  const int icon_side = 5 * kGlyphScale;
  const int w = 4 + icon_side + 4 + text_width(digits) + 4;
  const int h = icon_side + 8;
  const int x0 = right ? PixelFrame::kWidth - w - 2 : 2;
  const int y0 = bottom ? PixelFrame::kHeight - h - 2 : 2;
  cv.pixel_box(x0, y0, w, h, kHudPanel);
  cv.pixel_box(x0 + 4, y0 + 4, icon_side, icon_side, icon);
  draw_digits(cv, x0 + 8 + icon_side, y0 + 4, digits);
}

const Rgb& tower_colour(TowerType t) {
  switch (t) {
    case TowerType::knight: return kKnightTower;
    case TowerType::magician: return kMagicianTower;
    case TowerType::archer: return kArcherTower;
    default: return kTowerPoint;
  }
}

}  // namespace

PixelFrame render_pixels(const Snapshot& v, const LevelConfig& level, const EntityCatalog& catalog) {
  PixelFrame f;
  f.rgb.resize(static_cast<std::size_t>(PixelFrame::kWidth) * PixelFrame::kHeight * 3);
  Canvas cv(f);
  for (int y = 0; y < PixelFrame::kHeight; ++y)
    for (int x = 0; x < PixelFrame::kWidth; ++x) cv.put(x, y, kGrass);

  for (const auto& road : level.roads)
    for (std::size_t i = 0; i + 1 < road.size(); ++i) cv.thick_line(road[i], road[i + 1], 0.22, kRoad);
  cv.fill_rect(level.destination, 0.3, 0.3, kDestination);

  for (const auto& t : v.towers) {
    if (t.type == TowerType::none) {
      cv.fill_rect(t.position, kTowerBoxSide, kTowerBoxSide, kTowerPoint);
      cv.fill_rect(t.position, kTowerBoxSide - 0.08, kTowerBoxSide - 0.08, kGrass);
      continue;
    }
    cv.fill_rect(t.position, kTowerBoxSide * 0.8, kTowerBoxSide * 0.8, tower_colour(t.type));
    if (t.frozen) cv.fill_rect(t.position, kTowerBoxSide * 0.4, kTowerBoxSide * 0.4, kFrozen);
    for (int k = 0; k < std::min(t.upgrade_level, 5); ++k)
      cv.fill_rect(t.position + Vec2(-0.16 + 0.08 * k, -0.16), 0.05, 0.05, kRange);
    if (t.type == TowerType::knight) cv.triangle(t.assembly, 0.06, kAssembly);
    if (t.point_index == v.show_range_tower)
      cv.ring(t.position, 0.5 * catalog.tower(t.type).attack_range, 2.0, kRange);
  }

  for (const auto& p : v.fire_positions) cv.fill_circle(p, 0.25, kFire);
  if (v.drop_visible) cv.fill_circle(v.drop_position, 0.07, kGold);
  for (const auto& e : v.enemies) {
    if (catalog.enemy(e.type).movement == MovementType::flying)
      cv.triangle(e.position, 0.08, kFlyingEnemy);
    else
      cv.fill_circle(e.position, 0.07, kGroundEnemy);
  }
  for (const auto& k : v.knights) cv.fill_circle(k.position, 0.06, kKnight);
  if (v.hero_visible && !v.hero_dead) {
    cv.fill_circle(v.hero_position, 0.1, kHeroOutline);
    cv.fill_circle(v.hero_position, 0.08, kHero);
  }

  if (v.fog_obstructs) cv.fill_rect(v.fog_center, level.fog.width, level.fog.height, kFog);

  hud_counter(cv, false, false, kGold, v.gold);
  hud_counter(cv, true, false, kGroundEnemy, v.remaining_waves);
  hud_counter(cv, false, true, kHero, v.hero_visible ? v.hero_health : 0);
  hud_counter(cv, true, true, kDestination, v.base_health);
  return f;
}

PixelFrame render_pixels(const GameState& state, const LevelConfig& level,
                         const EntityCatalog& catalog) {
  return render_pixels(take_snapshot(state, level), level, catalog);
}

}  // namespace tdenv
