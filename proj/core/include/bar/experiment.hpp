#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bar/config.hpp"
#include "bar/csv.hpp"
#include "bar/env.hpp"
#include "bar/stats.hpp"

namespace bar {

/// Gap tolerance for deciding eps-optimality: arm i counts when gap_i < eps - kGapTolerance,
/// so that 0.6 - 0.5 (= 0.09999999999999998) is not mistaken for a gap below 0.1.
inline constexpr double kGapTolerance = 1e-12;

/// Everything one trial produced, beyond the CSV row.
struct TrialOutcome {
  TrialRecord record;
  std::vector<ArmIndex> retained;
  PullStats stats;
  /// Sample count predicted by the closed-form budget for this trial.
  std::uint64_t expected_samples = 0;
  /// Empty when every structural invariant held; otherwise the first violation.
  std::string structure_error;
  /// Median-elimination trials: true when no round needed tie handling.
  bool nominal_schedule = true;
};

/// Runs trial `trial_id` on stream (config.seed, trial_id).
TrialOutcome run_trial(const ExperimentConfig& config, const BernoulliInstance& instance,
                       std::uint64_t trial_id);

/// Runs all trials (in parallel when configured); outcome i is trial i.
std::vector<TrialOutcome> run_trials(const ExperimentConfig& config);

/// One pass/fail acceptance comparison: observed <relation> threshold.
struct GateCheck {
  std::string name;
  double observed = 0.0;
  std::string relation;  // "<=", "<" or "=="
  double threshold = 0.0;
  bool passed = false;
};

struct ExperimentSummary {
  ExperimentConfig config;
  std::size_t n = 0;
  std::vector<TrialRecord> records;
  MeanEstimate samples;
  MeanEstimate regret;
  MeanEstimate gap;
  std::uint64_t failures = 0;  // trials whose retained set lacks an eps-optimal arm
  ProportionInterval failure_rate;
  std::uint64_t structure_violations = 0;
  std::uint64_t accounting_mismatches = 0;  // samples_used != closed-form budget
  std::uint64_t nominal_schedule_trials = 0;
  std::vector<GateCheck> gates;
  /// Human-readable order-of-growth reference next to the observed sample count.
  std::string reference_scale;

  bool passed() const noexcept;
};

/// Folds trial outcomes in trial order into a summary with the algorithm's gates.
ExperimentSummary summarize(const ExperimentConfig& config, const std::vector<TrialOutcome>& outcomes);

/// run_trials + summarize; writes the CSV to config.output_path when set
/// (IoError if it cannot be written).
ExperimentSummary run_experiment(const ExperimentConfig& config);

void print_summary(std::ostream& out, const ExperimentSummary& summary);

}  // namespace bar
