#include "bar/explore.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "bar/errors.hpp"

namespace bar {

namespace {

void validate_arm_set(std::span<const ArmIndex> arms, const BernoulliInstance& instance,
                      const char* who) {
  if (arms.empty()) throw InputError(std::string(who) + ": empty arm set");
  std::vector<ArmIndex> sorted(arms.begin(), arms.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.back() >= instance.size()) {
    throw InputError(std::string(who) + ": arm index out of range");
  }
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InputError(std::string(who) + ": duplicate arm in arm set");
  }
}

// Elements of `all` not in `removed`, in the order of `all`.
std::vector<ArmIndex> set_difference_ordered(std::span<const ArmIndex> all,
                                             std::span<const ArmIndex> removed) {
  std::vector<ArmIndex> out;
  out.reserve(all.size());
  for (ArmIndex a : all) {
    if (std::find(removed.begin(), removed.end(), a) == removed.end()) out.push_back(a);
  }
  return out;
}

}  // namespace

std::uint64_t ceil_budget(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw InputError("ceil_budget: budget must be finite and >= 0");
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, x)) return static_cast<std::uint64_t>(nearest);
  return static_cast<std::uint64_t>(std::ceil(x));
}

void PacParams::validate(std::size_t n) const {
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("PacParams: eps must be in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("PacParams: delta must be in (0,1)");
  if (m < 1 || m > n) {
    throw InputError("PacParams: m must satisfy 1 <= m <= n (m=" + std::to_string(m) +
                     ", n=" + std::to_string(n) + ")");
  }
}

// ---------------------------------------------------------------- median elimination

std::uint64_t median_elimination_pulls(double eps_round, double delta_round) {
  return ceil_budget(4.0 / (eps_round * eps_round) * std::log(3.0 / delta_round));
}

MedianEliminationResult median_elimination(std::span<const ArmIndex> arms, double eps, double delta,
                                           const BernoulliInstance& instance, RngStream& rng) {
  validate_arm_set(arms, instance, "median_elimination");
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("median_elimination: eps must be in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("median_elimination: delta must be in (0,1)");

  MedianEliminationResult out;
  out.stats = PullStats(instance.size());
  std::vector<ArmIndex> survivors(arms.begin(), arms.end());
  std::vector<std::uint64_t> sums;
  double eps_round = eps / 4.0;
  double delta_round = delta / 2.0;

  while (survivors.size() > 1) {
    const std::uint64_t pulls = median_elimination_pulls(eps_round, delta_round);
    const std::size_t k = survivors.size();
    MedianEliminationRound round{k, pulls, false};

    // Every survivor gets the same number of pulls, so reward sums order the
    // empirical means exactly.
    sums.assign(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::uint64_t s = 0; s < pulls; ++s) {
        const int reward = sample(instance, survivors[i], rng);
        out.stats.record(survivors[i], reward);
        sums[i] += static_cast<std::uint64_t>(reward);
      }
    }
    out.samples += k * pulls;

    const std::size_t keep = (k + 1) / 2;
    std::vector<std::uint64_t> ranked = sums;
    std::nth_element(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep - 1),
                     ranked.end(), std::greater<>());
    const std::uint64_t median = ranked[keep - 1];

    std::vector<ArmIndex> next;
    for (std::size_t i = 0; i < k; ++i) {
      if (sums[i] >= median) next.push_back(survivors[i]);
    }
    if (next.size() == k) {
      std::vector<std::size_t> order(k);
      for (std::size_t i = 0; i < k; ++i) order[i] = i;
      rng.shuffle(std::span<std::size_t>(order));
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return sums[a] > sums[b]; });
      next.clear();
      for (std::size_t i = 0; i < keep; ++i) next.push_back(survivors[order[i]]);
      round.tie_broken = true;
    }
    out.rounds.push_back(round);
    survivors = std::move(next);
    eps_round *= 0.75;
    delta_round /= 2.0;
  }
  out.arm = survivors.front();
  return out;
}

std::uint64_t median_elimination_nominal_samples(std::size_t k, double eps, double delta) {
  std::uint64_t total = 0;
  double eps_round = eps / 4.0;
  double delta_round = delta / 2.0;
  while (k > 1) {
    total += k * median_elimination_pulls(eps_round, delta_round);
    k = (k + 1) / 2;
    eps_round *= 0.75;
    delta_round /= 2.0;
  }
  return total;
}

std::uint64_t median_elimination_schedule_samples(std::span<const MedianEliminationRound> rounds,
                                                  double eps, double delta) {
  std::uint64_t total = 0;
  double eps_round = eps / 4.0;
  double delta_round = delta / 2.0;
  for (const auto& r : rounds) {
    total += r.survivors * median_elimination_pulls(eps_round, delta_round);
    eps_round *= 0.75;
    delta_round /= 2.0;
  }
  return total;
}

// ---------------------------------------------------------------- (eps, delta) retention

double pac_bar_inner_delta(std::size_t n, const PacParams& params) {
  return static_cast<double>(n) * params.delta / static_cast<double>(n - params.m + 1);
}

PacBarResult pac_bar(std::span<const ArmIndex> arms, const PacParams& params,
                     const BernoulliInstance& instance, RngStream& rng) {
  validate_arm_set(arms, instance, "pac_bar");
  const std::size_t n = arms.size();
  params.validate(n);

  PacBarResult out;
  out.result.stats = PullStats(instance.size());
  const double inner = pac_bar_inner_delta(n, params);
  if (inner >= 1.0) {
    out.random_only = true;
    out.result.retained = rng.sample_without_replacement(arms, params.m);
    return out;
  }

  out.candidates = rng.sample_without_replacement(arms, n - params.m + 1);
  auto me = median_elimination(out.candidates, params.eps, inner, instance, rng);
  out.result.retained = set_difference_ordered(arms, out.candidates);
  out.result.retained.push_back(me.arm);
  out.result.samples_used = me.samples;
  out.result.stats = std::move(me.stats);
  out.result.chosen = me.arm;
  out.rounds = std::move(me.rounds);
  return out;
}

// ---------------------------------------------------------------- mirror-descent retention

std::size_t choose_proportional(std::span<const std::uint64_t> counts, RngStream& rng) {
  if (counts.empty()) throw InputError("choose_proportional: no candidates");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) return static_cast<std::size_t>(rng.uniform_below(counts.size()));
  std::uint64_t u = rng.uniform_below(total);
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (u < counts[j]) return j;
    u -= counts[j];
  }
  return counts.size() - 1;  // unreachable
}

FindBestResult find_best(std::span<const ArmIndex> arms, std::uint64_t rounds,
                         const BernoulliInstance& instance, const OsmdConfig& config,
                         RngStream& rng) {
  validate_arm_set(arms, instance, "find_best");
  OsmdConfig cfg = config;
  cfg.rounds = rounds;
  FindBestResult out;
  out.stats = run_osmd(arms, instance, cfg, rng);
  std::vector<std::uint64_t> counts(arms.size());
  for (std::size_t j = 0; j < arms.size(); ++j) counts[j] = out.stats.pulls[arms[j]];
  out.arm = arms[choose_proportional(counts, rng)];
  return out;
}

namespace {

void validate_retention(std::size_t n, std::size_t m, double r, const char* who) {
  if (m < 1 || m > n) throw InputError(std::string(who) + ": need 1 <= m <= n");
  if (!(r > 0.0) || !std::isfinite(r)) throw InputError(std::string(who) + ": r must be positive");
}

double cube(double x) { return x * x * x; }

}  // namespace

std::uint64_t r_bar_sample_budget(std::size_t n, std::size_t m, double r) {
  validate_retention(n, m, r, "r_bar_sample_budget");
  const double nr = static_cast<double>(n) * r;
  return ceil_budget(2.0 * cube(static_cast<double>(n - m + 2)) / (nr * nr));
}

RBarRegretBudgets r_bar_regret_budgets(std::size_t n, std::size_t m, double r) {
  validate_retention(n, m, r, "r_bar_regret_budgets");
  if (m < 2) throw InputError("r_bar_regret_budgets: stage budgets need m >= 2");
  RBarRegretBudgets b;
  const double n1 = static_cast<double>(n - 1);
  b.second_exact = 2.0 * cube(static_cast<double>(n - m + 2)) / (n1 * n1 * r * r);
  b.first_exact = static_cast<double>(m - 2) / n1 * b.second_exact;
  b.second = ceil_budget(b.second_exact);
  b.first = ceil_budget(b.first_exact);
  return b;
}

std::uint64_t r_bar_single_budget(std::size_t n, double r) {
  validate_retention(n, 1, r, "r_bar_single_budget");
  return ceil_budget(2.0 * static_cast<double>(n) / (r * r));
}

double r_bar_regret_bound(std::size_t n, std::size_t m, double r) {
  validate_retention(n, m, r, "r_bar_regret_bound");
  const double nd = static_cast<double>(n);
  if (m == 1) return std::sqrt(2.0 * nd * (2.0 * nd / (r * r)));
  const auto b = r_bar_regret_budgets(n, m, r);
  const double stage1 = std::sqrt(2.0 * nd * b.first_exact);
  const double stage2 = std::sqrt(2.0 * static_cast<double>(n - m + 2) * b.second_exact);
  // (m-2)/(n-1) * sqrt(2n/L1) * L2 with L1 = (m-2)/(n-1) L2, written without the
  // 0 * inf that the literal form hits at m = 2.
  const double miss = std::sqrt(static_cast<double>(m - 2) / (nd - 1.0) * 2.0 * nd * b.second_exact);
  return stage1 + stage2 + miss;
}

RetentionResult r_bar_sample(std::span<const ArmIndex> arms, std::size_t m, double r,
                             const BernoulliInstance& instance, const OsmdConfig& config,
                             RngStream& rng) {
  validate_arm_set(arms, instance, "r_bar_sample");
  const std::size_t n = arms.size();
  validate_retention(n, m, r, "r_bar_sample");
  const std::uint64_t budget = r_bar_sample_budget(n, m, r);

  const auto candidates = rng.sample_without_replacement(arms, n - m + 1);
  auto fb = find_best(candidates, budget, instance, config, rng);

  RetentionResult out;
  out.retained = set_difference_ordered(arms, candidates);
  out.retained.push_back(fb.arm);
  out.samples_used = fb.stats.rounds;
  out.stats = std::move(fb.stats);
  out.chosen = fb.arm;
  return out;
}

RBarRegretResult r_bar_regret(std::span<const ArmIndex> arms, std::size_t m, double r,
                              const BernoulliInstance& instance, const OsmdConfig& config,
                              RngStream& rng) {
  validate_arm_set(arms, instance, "r_bar_regret");
  const std::size_t n = arms.size();
  validate_retention(n, m, r, "r_bar_regret");

  RBarRegretResult out;
  if (m == 1) {
    auto fb = find_best(arms, r_bar_single_budget(n, r), instance, config, rng);
    out.first_pick = out.second_pick = fb.arm;
    out.result.retained = {fb.arm};
    out.result.samples_used = fb.stats.rounds;
    out.result.stats = std::move(fb.stats);
    out.result.chosen = fb.arm;
    return out;
  }

  const auto budgets = r_bar_regret_budgets(n, m, r);
  auto first = find_best(arms, budgets.first, instance, config, rng);
  out.first_pick = first.arm;

  const ArmIndex picked[] = {first.arm};
  const auto pool = set_difference_ordered(arms, picked);
  out.candidates = rng.sample_without_replacement(std::span<const ArmIndex>(pool), n - m + 1);

  std::vector<ArmIndex> stage_two = out.candidates;
  stage_two.push_back(first.arm);
  auto second = find_best(stage_two, budgets.second, instance, config, rng);
  out.second_pick = second.arm;

  std::vector<ArmIndex> dropped;
  if (second.arm == first.arm) {
    // i2 = i1 is not in S', so S' \ {i2} = S'.
    dropped = rng.sample_without_replacement(std::span<const ArmIndex>(out.candidates), n - m);
  } else {
    const ArmIndex keep[] = {second.arm};
    dropped = set_difference_ordered(out.candidates, keep);
  }
  out.result.retained = set_difference_ordered(arms, dropped);
  out.result.stats = std::move(first.stats);
  out.result.stats.merge(second.stats);
  out.result.samples_used = out.result.stats.rounds;
  out.result.chosen = second.arm;
  return out;
}

}  // namespace bar
