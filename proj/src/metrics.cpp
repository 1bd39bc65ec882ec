#include "tdenv/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace tdenv {

double score(const EpisodeRecord& r) { return r.score; }

double valid_action_rate(std::int64_t valid, std::int64_t total) {
  if (total <= 0) throw std::domain_error("valid action rate is undefined for zero actions");
  if (valid < 0 || valid > total) throw std::domain_error("valid action count outside [0, total]");
  return static_cast<double>(valid) / static_cast<double>(total);
}

double valid_action_rate(const EpisodeRecord& r) {
  return valid_action_rate(r.valid_action_count, r.total_action_count);
}

double normalize(double raw, double human, double minimum) {
  if (human == minimum) throw std::domain_error("human baseline equals the minimum; cannot normalize");
  return (raw - minimum) / (human - minimum);
}

const std::array<BaselineEntry, 5>& human_baselines() {
  static const std::array<BaselineEntry, 5> table = {{
      {"Lv1", 0.00, 0.99},
      {"Lv2", -0.20, 0.98},
      {"Lv3", -0.40, 0.97},
      {"Lv4", -1.80, 0.94},
      {"Lv5", -3.40, 0.93},
  }};
  return table;
}

const BaselineEntry& baseline_for(const std::string& level) {
  for (const auto& b : human_baselines())
    if (b.level == level) return b;
  throw std::out_of_range("no human baseline for level '" + level + "'");
}

MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe m;
  m.n = xs.size();
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.se = std::sqrt(ss / static_cast<double>(xs.size() - 1)) / std::sqrt(static_cast<double>(xs.size()));
  }
  return m;
}

}  // namespace tdenv
