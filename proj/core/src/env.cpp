#include "bar/env.hpp"

#include <algorithm>
#include <atomic>
#include <iostream>
#include <numeric>
#include <string>

#include "bar/errors.hpp"

namespace bar {

BernoulliInstance::BernoulliInstance(std::vector<double> means) : means_(std::move(means)) {
  if (means_.empty()) throw InputError("BernoulliInstance: need at least one arm");
  for (std::size_t i = 0; i < means_.size(); ++i) {
    const double m = means_[i];
    if (!(m >= 0.0 && m <= 1.0)) {
      throw InputError("BernoulliInstance: mean of arm " + std::to_string(i) +
                       " outside [0,1]: " + std::to_string(m));
    }
    if (m > means_[best_]) best_ = i;
  }
}

double BernoulliInstance::mean(ArmIndex arm) const {
  if (arm >= means_.size()) {
    throw InputError("arm index " + std::to_string(arm) + " out of range for " +
                     std::to_string(means_.size()) + " arms");
  }
  return means_[arm];
}

double BernoulliInstance::gap(ArmIndex arm) const { return best_mean() - mean(arm); }

std::vector<ArmIndex> BernoulliInstance::arms() const {
  std::vector<ArmIndex> out(means_.size());
  std::iota(out.begin(), out.end(), ArmIndex{0});
  return out;
}

int sample(const BernoulliInstance& instance, ArmIndex arm, RngStream& rng) {
  return rng.bernoulli(instance.mean(arm));
}

BernoulliInstance hard_instance(std::size_t n, double eps, std::optional<ArmIndex> j) {
  if (n < 2) throw InputError("hard_instance: need n >= 2");
  if (!(eps >= 0.0)) throw InputError("hard_instance: eps must be non-negative");
  if (eps > 0.25) throw InputError("hard_instance: eps > 1/4 pushes 1/2+2eps outside [0,1]");
  static std::atomic<bool> warned{false};
  if (eps > 0.125 && !warned.exchange(true)) {
    std::clog << "warning: hard_instance eps=" << eps
              << " exceeds 1/8; lower-bound statements assume eps <= 1/8\n";
  }
  if (j && *j == 0) throw InputError("hard_instance: j must differ from arm 0 (use j absent)");
  if (j && *j >= n) throw InputError("hard_instance: j out of range");

  std::vector<double> means(n, 0.5);
  means[0] = 0.5 + eps;
  if (j) means[*j] = 0.5 + 2.0 * eps;
  return BernoulliInstance(std::move(means));
}

double expected_gap(const BernoulliInstance& instance, std::span<const ArmIndex> retained) {
  if (retained.empty()) throw InputError("expected_gap: retained set is empty");
  double best_kept = 0.0;
  for (ArmIndex arm : retained) best_kept = std::max(best_kept, instance.mean(arm));
  return instance.best_mean() - best_kept;
}

void PullStats::merge(const PullStats& other) {
  if (pulls.size() != other.pulls.size()) {
    throw InputError("PullStats::merge: size mismatch");
  }
  for (std::size_t i = 0; i < pulls.size(); ++i) pulls[i] += other.pulls[i];
  cumulative_reward += other.cumulative_reward;
  rounds += other.rounds;
}

double PullStats::realized_regret(const BernoulliInstance& instance) const {
  if (pulls.size() != instance.size()) {
    throw InputError("PullStats::realized_regret: size mismatch with instance");
  }
  double regret = 0.0;
  for (std::size_t i = 0; i < pulls.size(); ++i) {
    regret += instance.gap(i) * static_cast<double>(pulls[i]);
  }
  return regret;
}

bool PullStats::consistent() const noexcept {
  return std::accumulate(pulls.begin(), pulls.end(), std::uint64_t{0}) == rounds;
}

}  // namespace bar
