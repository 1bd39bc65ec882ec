#pragma once

#include <array>
#include <cstdint>

namespace tdenv {

/// xoshiro256** seeded through splitmix64.
///
/// Every stochastic event in the simulator draws from a single instance of this
/// generator in tick order. The derived distributions below are implemented
/// here rather than with <random> distributions, whose algorithms differ
/// between standard libraries and would break cross-platform replay.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) { reseed(seed); }

  void reseed(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in the closed range [lo, hi]. Consumes exactly one draw.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Bernoulli trial; always consumes exactly one draw.
  bool bernoulli(double p) { return uniform01() < p; }

  const std::array<std::uint64_t, 4>& raw_state() const { return s_; }

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace tdenv
