#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bar/rng.hpp"

namespace bar {

/// Arms are addressed by 0-based position in the instance's mean vector.
using ArmIndex = std::size_t;

/// Stochastic bandit with Bernoulli arms. Immutable after construction.
class BernoulliInstance {
 public:
  /// Throws InputError if `means` is empty or any mean lies outside [0,1].
  explicit BernoulliInstance(std::vector<double> means);

  std::size_t size() const noexcept { return means_.size(); }
  double mean(ArmIndex arm) const;
  std::span<const double> means() const noexcept { return means_; }

  /// Highest-mean arm; ties go to the lowest index.
  ArmIndex best_arm() const noexcept { return best_; }
  double best_mean() const noexcept { return means_[best_]; }
  /// best_mean() - mean(arm), always >= 0.
  double gap(ArmIndex arm) const;

  /// All arm indices 0..n-1.
  std::vector<ArmIndex> arms() const;

  friend bool operator==(const BernoulliInstance&, const BernoulliInstance&) = default;

 private:
  std::vector<double> means_;
  ArmIndex best_ = 0;
};

/// Draws one reward from `arm`. Throws InputError for an out-of-range arm.
int sample(const BernoulliInstance& instance, ArmIndex arm, RngStream& rng);

/*
Hard lower-bound instances. With j absent this is (1/2+eps, 1/2, ..., 1/2); with
j present, coordinate j is additionally raised to 1/2+2*eps. j is 0-based and
must not be 0 (arm 0 carries the +eps bump). eps above 1/8 is accepted with a
warning on std::clog since the lower-bound results assume eps <= 1/8; eps above
1/4 is rejected because 1/2+2*eps would leave [0,1].
*/
BernoulliInstance hard_instance(std::size_t n, double eps, std::optional<ArmIndex> j = std::nullopt);

/// best mean minus the best retained mean for one realization of a retained set.
double expected_gap(const BernoulliInstance& instance, std::span<const ArmIndex> retained);

/// Per-arm pull accounting for one run. `pulls` is indexed by instance arm.
struct PullStats {
  std::vector<std::uint64_t> pulls;
  double cumulative_reward = 0.0;
  std::uint64_t rounds = 0;

  PullStats() = default;
  explicit PullStats(std::size_t n) : pulls(n, 0) {}

  void record(ArmIndex arm, int reward) {
    ++pulls[arm];
    cumulative_reward += reward;
    ++rounds;
  }

  /// Adds another run's counts (same instance size).
  void merge(const PullStats& other);

  /// sum_i gap_i * T_i from final counts.
  double realized_regret(const BernoulliInstance& instance) const;

  /// sum_i T_i == rounds.
  bool consistent() const noexcept;

  friend bool operator==(const PullStats&, const PullStats&) = default;
};

}  // namespace bar
