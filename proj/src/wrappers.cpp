#include "tdenv/wrappers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tdenv {

int encode_grid(const GridAction& g) {
  if (g.i < 0 || g.i >= kGridCells || g.j < 0 || g.j >= kGridCells || g.c < 0 ||
      g.c >= kActionTypeCount)
    throw std::out_of_range("grid action out of range");
  return (g.i * kGridCells + g.j) * kActionTypeCount + g.c;
}

GridAction decode_grid(int flat) {
  if (flat < 0 || flat >= kDiscreteActionCount)
    throw std::out_of_range("discrete action " + std::to_string(flat) + " outside [0, " +
                            std::to_string(kDiscreteActionCount - 1) + "]");
  const int c = flat % kActionTypeCount;
  const int cell = flat / kActionTypeCount;
  return {cell / kGridCells, cell % kGridCells, c};
}

double grid_center(int cell) { return -kMapHalfExtent + kGridPitch * cell + 0.5 * kGridPitch; }

Action discretize(int flat) {
  const GridAction g = decode_grid(flat);
  return {grid_center(g.i), grid_center(g.j), g.c};
}

GridAction continuous_to_grid(const Action& a) {
  check_action(a);
  const auto cell = [](double v) {
    const int k = static_cast<int>(std::floor((v + kMapHalfExtent) / kGridPitch));
    return std::clamp(k, 0, kGridCells - 1);
  };
  return {cell(a.x), cell(a.y), a.c};
}

void apply_step_penalty(StepResult& r, double penalty) { r.reward += penalty; }

std::vector<std::uint8_t> downsample(const std::vector<std::uint8_t>& rgb, int width, int height,
                                     int factor) {
  if (factor < 1 || width % factor != 0 || height % factor != 0)
    throw std::invalid_argument("downsample factor must divide the frame size");
  if (rgb.size() != static_cast<std::size_t>(width) * height * 3)
    throw std::invalid_argument("frame buffer size does not match its dimensions");
  const int ow = width / factor, oh = height / factor, n = factor * factor;
  std::vector<std::uint8_t> out(static_cast<std::size_t>(ow) * oh * 3);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x)
      for (int ch = 0; ch < 3; ++ch) {
        int sum = 0;
        for (int dy = 0; dy < factor; ++dy)
          for (int dx = 0; dx < factor; ++dx)
            sum += rgb[(static_cast<std::size_t>(y * factor + dy) * width + x * factor + dx) * 3 + ch];
        out[(static_cast<std::size_t>(y) * ow + x) * 3 + ch] =
            static_cast<std::uint8_t>((sum + n / 2) / n);
      }
  return out;
}

std::vector<std::uint8_t> downsample_frame(const PixelFrame& f) {
  return downsample(f.rgb, PixelFrame::kWidth, PixelFrame::kHeight, 4);
}

WrappedEnvironment::WrappedEnvironment(Environment env, WrapperOptions options)
    : env_(std::move(env)), options_(options), history_(options.history) {}

WrappedObservation WrappedEnvironment::wrap(Observation o) const {
  WrappedObservation w;
  if (options_.downsample_pixels && o.pixels) w.small_pixels = downsample_frame(*o.pixels);
  w.observation = std::move(o);
  return w;
}

WrappedObservation WrappedEnvironment::reset(std::uint64_t seed) {
  Observation o = env_.reset(seed);
  last_text_ = o.text.empty() ? env_.observe_text() : o.text;
  history_.reset(last_text_);
  return wrap(std::move(o));
}

WrappedStep WrappedEnvironment::step(const Action& action) {
  const std::string before = last_text_;
  StepResult r = env_.step(action);
  WrappedStep w;
  w.raw_reward = r.reward;
  if (options_.step_penalty) apply_step_penalty(r);
  w.reward = r.reward;
  w.done = r.done;
  w.info = r.info;
  history_.push(before, action);
  last_text_ = r.observation.text.empty() ? env_.observe_text() : r.observation.text;
  w.observation = wrap(std::move(r.observation));
  return w;
}

}  // namespace tdenv
