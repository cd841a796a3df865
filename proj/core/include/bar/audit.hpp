#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "bar/config.hpp"
#include "bar/env.hpp"
#include "bar/rng.hpp"

namespace bar {

/// Record of one fixed-budget run: the arm played and reward seen each round.
struct Transcript {
  std::vector<ArmIndex> arms;
  std::vector<int> rewards;

  void push(ArmIndex arm, int reward) {
    arms.push_back(arm);
    rewards.push_back(reward);
  }
  std::vector<std::uint64_t> pull_counts(std::size_t n) const;
  /// Empirical mean of `arm`; 0 when never pulled.
  double empirical_mean(ArmIndex arm) const;
};

/// A non-adaptive or adaptive policy that stops after a fixed number of pulls.
using SamplingPolicy = std::function<void(const BernoulliInstance&, RngStream&, Transcript&)>;
using EventPredicate = std::function<bool(const Transcript&)>;

/// Pulls arms 0, 1, ..., n-1 in turn, `pulls_per_arm` times each.
SamplingPolicy round_robin(std::uint64_t pulls_per_arm);
/// Empirical mean of `arm` strictly exceeds that of `other`.
EventPredicate mean_exceeds(ArmIndex arm, ArmIndex other);
EventPredicate always();

struct AuditResult {
  /// sum_i E_mu[T_i] d(mu_i, mu'_i), estimated from the mu runs.
  double lhs = 0.0;
  double lhs_se = 0.0;
  /// d(P_mu[E], P_mu'[E]) at the estimated probabilities.
  double rhs = 0.0;
  /// Delta-method standard error; 0 when either probability estimate is 0 or 1.
  double rhs_se = 0.0;
  double event_prob = 0.0;
  double event_prob_alt = 0.0;
  std::vector<double> mean_pulls;
  /// Either probability estimate sits at 0 or 1.
  bool boundary = false;

  /// lhs + 3 se_lhs >= rhs - 3 se_rhs
  bool passed() const noexcept;
};

/*
Monte Carlo check of the change-of-measure inequality
    sum_i E_mu[T_i] d(mu_i, mu'_i) >= d(P_mu[E], P_mu'[E]).
Trial t on mu uses stream (seed, t); on mu' it uses stream (mix(seed), t).
*/
AuditResult likelihood_ratio_audit(const BernoulliInstance& mu, const BernoulliInstance& mu_alt,
                                   const SamplingPolicy& policy, const EventPredicate& event,
                                   std::uint64_t trials, std::uint64_t seed,
                                   unsigned parallelism = 1);

/// Builds policy and event from a parsed config and runs the audit.
AuditResult run_audit(const AuditConfig& config);

void print_audit(std::ostream& out, const AuditResult& result);

}  // namespace bar
