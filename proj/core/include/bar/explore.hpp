#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bar/env.hpp"
#include "bar/osmd.hpp"
#include "bar/rng.hpp"

namespace bar {

/// Rounds a real-valued budget up, treating values within 1e-9 (relative) of an
/// integer as that integer so that e.g. 1458 / 0.81 does not become 1801.
std::uint64_t ceil_budget(double x);

struct RetentionResult {
  std::vector<ArmIndex> retained;
  std::uint64_t samples_used = 0;
  PullStats stats;
  std::optional<ArmIndex> chosen;
};

struct PacParams {
  double eps = 0.0;
  double delta = 0.0;
  std::size_t m = 1;

  /// Throws InputError unless 0 < eps < 1, 0 < delta < 1 and 1 <= m <= n.
  void validate(std::size_t n) const;
};

// ---------------------------------------------------------------- median elimination

/// Pulls per surviving arm in a round: ceil(4 / eps_l^2 * ln(3 / delta_l)).
std::uint64_t median_elimination_pulls(double eps_round, double delta_round);

struct MedianEliminationRound {
  std::size_t survivors = 0;       // |S_l| entering the round
  std::uint64_t pulls_per_arm = 0;
  bool tie_broken = false;         // round made no progress and fell back to random tie-breaking
};

struct MedianEliminationResult {
  ArmIndex arm = 0;
  std::uint64_t samples = 0;
  std::vector<MedianEliminationRound> rounds;
  PullStats stats;
};

/*
Median elimination over `arms`: eps_1 = eps/4, delta_1 = delta/2; each round pulls
every survivor median_elimination_pulls(eps_l, delta_l) times, keeps arms whose
empirical mean is at least the ceil(|S|/2)-th largest, then eps *= 3/4 and
delta /= 2. Ties at the median survive. If ties leave the survivor set
unchanged, the round instead keeps ceil(|S|/2) arms chosen by empirical mean
with uniform random tie-breaking, so the loop always terminates.
*/
MedianEliminationResult median_elimination(std::span<const ArmIndex> arms, double eps, double delta,
                                           const BernoulliInstance& instance, RngStream& rng);

/// Total samples when no round has ties at the median: survivors halve (rounded up).
std::uint64_t median_elimination_nominal_samples(std::size_t k, double eps, double delta);

/// Recomputes the sample total implied by a recorded survivor schedule.
std::uint64_t median_elimination_schedule_samples(std::span<const MedianEliminationRound> rounds,
                                                  double eps, double delta);

// ---------------------------------------------------------------- (eps, delta) retention

/// The confidence handed to median elimination: n * delta / (n - m + 1).
double pac_bar_inner_delta(std::size_t n, const PacParams& params);

struct PacBarResult {
  RetentionResult result;
  std::vector<ArmIndex> candidates;  // S', the arms handed to median elimination
  std::vector<MedianEliminationRound> rounds;
  bool random_only = false;          // inner delta >= 1: no sampling performed
};

/*
Chooses n-m+1 arms S' uniformly, runs median elimination on S' with
(eps, n*delta/(n-m+1)) and returns (S \ S') plus the arm it reports. When the
inner confidence is >= 1 no sampling is needed; m arms are returned uniformly.
*/
PacBarResult pac_bar(std::span<const ArmIndex> arms, const PacParams& params,
                     const BernoulliInstance& instance, RngStream& rng);

// ---------------------------------------------------------------- mirror-descent retention

/// Draws arm j with probability counts[j] / sum(counts); uniform when all are zero.
/// Returns an index into `counts`.
std::size_t choose_proportional(std::span<const std::uint64_t> counts, RngStream& rng);

struct FindBestResult {
  ArmIndex arm = 0;
  PullStats stats;
};

/// Mirror descent for `rounds` rounds over `arms`, then one arm drawn in
/// proportion to its pull count. `config.rounds` is ignored.
FindBestResult find_best(std::span<const ArmIndex> arms, std::uint64_t rounds,
                         const BernoulliInstance& instance, const OsmdConfig& config,
                         RngStream& rng);

/// T* = 2 (n-m+2)^3 / (n r)^2, rounded up.
std::uint64_t r_bar_sample_budget(std::size_t n, std::size_t m, double r);

struct RBarRegretBudgets {
  std::uint64_t first = 0;   // L1 = (m-2)/(n-1) * L2
  std::uint64_t second = 0;  // L2 = 2 (n-m+2)^3 / ((n-1)^2 r^2)
  double first_exact = 0.0;
  double second_exact = 0.0;
};

/// Stage budgets for the low-regret algorithm; requires 2 <= m <= n.
RBarRegretBudgets r_bar_regret_budgets(std::size_t n, std::size_t m, double r);

/// Rounds used when m = 1: 2n / r^2, rounded up.
std::uint64_t r_bar_single_budget(std::size_t n, double r);

/*
Regret bound for the low-regret algorithm with m >= 2:
  sqrt(2 n L1) + sqrt(2 (n-m+2) L2) + (m-2)/(n-1) * sqrt(2n / L1) * L2
evaluated at the unrounded budgets; the last term is dropped when m = 2.
For m = 1 the bound is sqrt(2 n L) with L = 2n / r^2.
*/
double r_bar_regret_bound(std::size_t n, std::size_t m, double r);

/// Picks n-m+1 arms S' uniformly, runs find_best(S', T*) and returns {i'} plus S \ S'.
RetentionResult r_bar_sample(std::span<const ArmIndex> arms, std::size_t m, double r,
                             const BernoulliInstance& instance, const OsmdConfig& config,
                             RngStream& rng);

struct RBarRegretResult {
  RetentionResult result;
  ArmIndex first_pick = 0;            // i1
  ArmIndex second_pick = 0;           // i2
  std::vector<ArmIndex> candidates;   // S', drawn from S \ {i1}
};

/*
Low-regret retention. For m >= 2:
  i1 = find_best(S, L1); S' = n-m+1 arms drawn from S \ {i1};
  i2 = find_best(S' + {i1}, L2);
  if i2 == i1 drop n-m uniformly chosen arms of S' \ {i2}, else drop S' \ {i2}.
For m = 1, find_best(S, 2n/r^2) and keep its output.
*/
RBarRegretResult r_bar_regret(std::span<const ArmIndex> arms, std::size_t m, double r,
                              const BernoulliInstance& instance, const OsmdConfig& config,
                              RngStream& rng);

}  // namespace bar
