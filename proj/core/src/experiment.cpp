#include "bar/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "bar/errors.hpp"
#include "bar/explore.hpp"
#include "bar/parallel.hpp"

namespace bar {

namespace {

bool contains_optimal(double gap, double threshold) {
  if (threshold > 0.0) return gap < threshold - kGapTolerance;
  return gap <= kGapTolerance;
}

bool halving_schedule(std::span<const MedianEliminationRound> rounds, std::size_t k) {
  for (const auto& r : rounds) {
    if (r.tie_broken || r.survivors != k) return false;
    k = (k + 1) / 2;
  }
  return k == 1;
}

std::string check_retained(std::span<const ArmIndex> retained, std::size_t m, std::size_t n) {
  if (retained.size() != m) {
    return "retained " + std::to_string(retained.size()) + " arms, expected " + std::to_string(m);
  }
  std::set<ArmIndex> unique(retained.begin(), retained.end());
  if (unique.size() != retained.size()) return "retained set has duplicates";
  if (!unique.empty() && *unique.rbegin() >= n) return "retained arm out of range";
  return {};
}

bool contains(std::span<const ArmIndex> set, ArmIndex a) {
  return std::find(set.begin(), set.end(), a) != set.end();
}

}  // namespace

TrialOutcome run_trial(const ExperimentConfig& config, const BernoulliInstance& instance,
                       std::uint64_t trial_id) {
  RngStream rng(config.seed, trial_id);
  const auto all = instance.arms();
  const std::size_t n = instance.size();

  TrialOutcome out;
  auto& rec = out.record;
  rec.trial_id = trial_id;
  rec.algorithm = std::string(to_string(config.algorithm));
  rec.n = n;

  switch (config.algorithm) {
    case Algorithm::osmd: {
      OsmdConfig cfg = config.osmd;
      cfg.rounds = *config.rounds;
      out.stats = run_osmd(all, instance, cfg, rng);
      rec.m = 0;
      rec.samples_used = out.stats.rounds;
      out.expected_samples = cfg.rounds;
      break;
    }
    case Algorithm::find_best: {
      auto fb = find_best(all, *config.rounds, instance, config.osmd, rng);
      out.retained = {fb.arm};
      out.stats = std::move(fb.stats);
      rec.m = 1;
      rec.eps_or_r = config.eps.value_or(0.0);
      rec.samples_used = out.stats.rounds;
      out.expected_samples = *config.rounds;
      break;
    }
    case Algorithm::median_elimination: {
      auto me = median_elimination(all, *config.eps, *config.delta, instance, rng);
      out.retained = {me.arm};
      out.stats = std::move(me.stats);
      rec.m = 1;
      rec.eps_or_r = *config.eps;
      rec.delta = *config.delta;
      rec.samples_used = me.samples;
      out.expected_samples = median_elimination_schedule_samples(me.rounds, *config.eps, *config.delta);
      out.nominal_schedule = halving_schedule(me.rounds, n);
      break;
    }
    case Algorithm::pac_bar: {
      const PacParams params{*config.eps, *config.delta, *config.m};
      auto res = pac_bar(all, params, instance, rng);
      out.retained = res.result.retained;
      out.stats = std::move(res.result.stats);
      rec.m = params.m;
      rec.eps_or_r = params.eps;
      rec.delta = params.delta;
      rec.samples_used = res.result.samples_used;
      if (res.random_only) {
        out.expected_samples = 0;
      } else {
        const double inner = pac_bar_inner_delta(n, params);
        out.expected_samples = median_elimination_schedule_samples(res.rounds, params.eps, inner);
        out.nominal_schedule = halving_schedule(res.rounds, res.candidates.size());
        // (S \ S') is kept whole; from S' exactly the median-elimination output survives.
        for (ArmIndex a : all) {
          const bool in_candidates = contains(res.candidates, a);
          const bool kept = contains(out.retained, a);
          if (!in_candidates && !kept) out.structure_error = "arm outside S' was dropped";
          if (in_candidates && kept && a != *res.result.chosen) {
            out.structure_error = "non-selected arm of S' retained";
          }
        }
        if (!contains(out.retained, *res.result.chosen)) {
          out.structure_error = "median-elimination output not retained";
        }
      }
      break;
    }
    case Algorithm::rbar_sample: {
      auto res = r_bar_sample(all, *config.m, *config.r, instance, config.osmd, rng);
      out.retained = res.retained;
      out.stats = std::move(res.stats);
      rec.m = *config.m;
      rec.eps_or_r = *config.r;
      rec.samples_used = res.samples_used;
      out.expected_samples = r_bar_sample_budget(n, *config.m, *config.r);
      if (!contains(out.retained, *res.chosen)) out.structure_error = "chosen arm not retained";
      break;
    }
    case Algorithm::rbar_regret: {
      const std::size_t m = *config.m;
      auto res = r_bar_regret(all, m, *config.r, instance, config.osmd, rng);
      out.retained = res.result.retained;
      out.stats = std::move(res.result.stats);
      rec.m = m;
      rec.eps_or_r = *config.r;
      rec.samples_used = res.result.samples_used;
      if (m == 1) {
        out.expected_samples = r_bar_single_budget(n, *config.r);
        break;
      }
      const auto budgets = r_bar_regret_budgets(n, m, *config.r);
      out.expected_samples = budgets.first + budgets.second;

      const auto& cand = res.candidates;
      std::size_t kept_from_candidates = 0;
      for (ArmIndex a : cand) kept_from_candidates += contains(out.retained, a) ? 1 : 0;
      bool outside_kept = true;  // S \ (S' + {i1}) must survive in both branches
      for (ArmIndex a : all) {
        if (!contains(cand, a) && a != res.first_pick && !contains(out.retained, a)) {
          outside_kept = false;
        }
      }
      if (contains(cand, res.first_pick)) out.structure_error = "S' must exclude the first pick";
      if (!outside_kept) out.structure_error = "arm outside S' + {i1} was dropped";
      if (!contains(out.retained, res.first_pick)) out.structure_error = "first pick dropped";
      if (kept_from_candidates != 1) out.structure_error = "expected exactly one survivor of S'";
      if (res.second_pick != res.first_pick && !contains(out.retained, res.second_pick)) {
        out.structure_error = "second pick dropped although it differs from the first";
      }
      break;
    }
  }

  rec.realized_regret = out.stats.realized_regret(instance);
  rec.realized_gap = out.retained.empty() ? 0.0 : expected_gap(instance, out.retained);
  rec.contains_eps_optimal = contains_optimal(rec.realized_gap, rec.eps_or_r);

  if (out.structure_error.empty() && config.algorithm != Algorithm::osmd) {
    out.structure_error = check_retained(out.retained, rec.m, n);
  }
  if (out.structure_error.empty()) {
    if (!out.stats.consistent()) out.structure_error = "sum of pulls differs from rounds";
    if (rec.samples_used != out.stats.rounds) out.structure_error = "samples_used differs from pulls";
  }
  return out;
}

std::vector<TrialOutcome> run_trials(const ExperimentConfig& config) {
  config.validate();
  const auto instance = build_instance(config.instance);
  std::vector<TrialOutcome> outcomes(config.trials);
  parallel_for(config.trials, config.parallelism,
               [&](std::uint64_t i) { outcomes[i] = run_trial(config, instance, i); });
  return outcomes;
}

bool ExperimentSummary::passed() const noexcept {
  return std::all_of(gates.begin(), gates.end(), [](const GateCheck& g) { return g.passed; });
}

ExperimentSummary summarize(const ExperimentConfig& config, const std::vector<TrialOutcome>& outcomes) {
  ExperimentSummary s;
  s.config = config;
  const auto instance = build_instance(config.instance);
  s.n = instance.size();

  std::vector<double> samples, regret, gap;
  for (const auto& o : outcomes) {
    s.records.push_back(o.record);
    samples.push_back(static_cast<double>(o.record.samples_used));
    regret.push_back(o.record.realized_regret);
    gap.push_back(o.record.realized_gap);
    s.failures += o.record.contains_eps_optimal ? 0 : 1;
    s.structure_violations += o.structure_error.empty() ? 0 : 1;
    s.accounting_mismatches += o.record.samples_used == o.expected_samples ? 0 : 1;
    s.nominal_schedule_trials += o.nominal_schedule ? 1 : 0;
  }
  s.samples = estimate_mean(samples);
  s.regret = estimate_mean(regret);
  s.gap = estimate_mean(gap);
  if (!outcomes.empty()) s.failure_rate = wilson_interval(s.failures, outcomes.size());

  auto gate = [&](std::string name, double observed, std::string rel, double threshold) {
    bool ok = false;
    if (rel == "<=") ok = observed <= threshold;
    if (rel == "<") ok = observed < threshold;
    if (rel == "==") ok = observed == threshold;
    s.gates.push_back({std::move(name), observed, std::move(rel), threshold, ok});
  };
  gate("structural invariants (violating trials)", static_cast<double>(s.structure_violations), "==", 0);
  gate("sample accounting vs closed-form budget (mismatching trials)",
       static_cast<double>(s.accounting_mismatches), "==", 0);

  const double n = static_cast<double>(s.n);
  std::ostringstream ref;
  switch (config.algorithm) {
    case Algorithm::osmd: {
      const double t = static_cast<double>(*config.rounds);
      gate("mean regret + 3 SE <= sqrt(2 n T)", s.regret.upper(), "<=", std::sqrt(2.0 * n * t));
      ref << "regret scale sqrt(nT) = " << std::sqrt(n * t);
      break;
    }
    case Algorithm::find_best: {
      const double t = static_cast<double>(*config.rounds);
      if (t > 0) gate("mean gap + 3 SE <= sqrt(2 n / T)", s.gap.upper(), "<=", std::sqrt(2.0 * n / t));
      break;
    }
    case Algorithm::median_elimination: {
      gate("Wilson 95% upper failure rate <= delta", s.failure_rate.upper, "<=", *config.delta);
      ref << "sample scale n/eps^2 log(1/delta) = "
          << n / (*config.eps * *config.eps) * std::log(1.0 / *config.delta);
      break;
    }
    case Algorithm::pac_bar: {
      gate("Wilson 95% upper failure rate <= delta", s.failure_rate.upper, "<=", *config.delta);
      const double k = n - static_cast<double>(*config.m) + 1.0;
      ref << "sample scale (n-m+1)/eps^2 log((n-m+1)/(n delta)) = "
          << k / (*config.eps * *config.eps) * std::log(k / (n * *config.delta));
      break;
    }
    case Algorithm::rbar_sample: {
      gate("mean gap + 3 SE < r", s.gap.upper(), "<", *config.r);
      const double d = n - static_cast<double>(*config.m);
      ref << "sample scale (n-m)^3/(n r)^2 = " << d * d * d / std::pow(n * *config.r, 2);
      break;
    }
    case Algorithm::rbar_regret: {
      gate("mean gap + 3 SE < r", s.gap.upper(), "<", *config.r);
      gate("mean regret + 3 SE <= three-stage regret bound", s.regret.upper(), "<=",
           r_bar_regret_bound(s.n, *config.m, *config.r));
      const double d = n - static_cast<double>(*config.m);
      ref << "regret scale (n-m)^2/(n r) = " << d * d / (n * *config.r);
      break;
    }
  }
  s.reference_scale = ref.str();
  return s;
}

ExperimentSummary run_experiment(const ExperimentConfig& config) {
  const auto outcomes = run_trials(config);
  auto summary = summarize(config, outcomes);
  if (!config.output_path.empty()) {
    std::ofstream out(config.output_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + config.output_path);
    write_csv(out, summary.records);
    if (!out) throw IoError("failed writing " + config.output_path);
  }
  return summary;
}

void print_summary(std::ostream& out, const ExperimentSummary& s) {
  out << "algorithm   " << to_string(s.config.algorithm) << "  (n=" << s.n
      << ", trials=" << s.records.size() << ", seed=" << s.config.seed << ")\n";
  out << std::setprecision(6);
  out << "samples     mean " << s.samples.mean << "  se " << s.samples.standard_error << '\n';
  out << "regret      mean " << s.regret.mean << "  se " << s.regret.standard_error << '\n';
  out << "gap         mean " << s.gap.mean << "  se " << s.gap.standard_error << '\n';
  out << "failures    " << s.failures << "  rate " << s.failure_rate.estimate << "  wilson95 ["
      << s.failure_rate.lower << ", " << s.failure_rate.upper << "]\n";
  if (!s.reference_scale.empty()) out << "reference   " << s.reference_scale << " (reported only)\n";
  for (const auto& g : s.gates) {
    out << (g.passed ? "PASS  " : "FAIL  ") << g.name << ": " << g.observed << ' ' << g.relation
        << ' ' << g.threshold << '\n';
  }
}

}  // namespace bar
