// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bar/audit.hpp"
#include "bar/config.hpp"
#include "bar/csv.hpp"
#include "bar/experiment.hpp"
#include "bar/explore.hpp"
#include "bar/kl.hpp"
#include "verify.hpp"

namespace {

struct Criterion {
  int id;
  std::string title;
  bool passed = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    passed = passed && ok;
  }
};

std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

bar::ExperimentConfig load(const char* name, unsigned parallelism) {
  auto c = bar::load_experiment_config(std::string(BAR_CONFIG_DIR) + "/" + name);
  c.output_path.clear();
  c.parallelism = parallelism;
  return c;
}

// Runs a config at parallelism 1, applies its gates, and keeps the CSV for the
// determinism criterion.
struct GateRun {
  std::vector<bar::TrialOutcome> outcomes;
  bar::ExperimentSummary summary;
  std::string csv;
};

GateRun run_config(const char* name, unsigned parallelism) {
  const auto c = load(name, parallelism);
  GateRun r;
  r.outcomes = bar::run_trials(c);
  r.summary = bar::summarize(c, r.outcomes);
  r.csv = bar::to_csv(r.summary.records);
  return r;
}

void add_gates(Criterion& c, const bar::ExperimentSummary& s) {
  for (const auto& g : s.gates) {
    c.require(g.passed, g.name + ": " + fmt(g.observed) + " " + g.relation + " " + fmt(g.threshold));
  }
}

bool all_samples(const bar::ExperimentSummary& s, std::uint64_t expected) {
  for (const auto& r : s.records) {
    if (r.samples_used != expected) return false;
  }
  return true;
}

bool same_checks(const std::vector<bar::verify::CheckResult>& a, const std::vector<bar::verify::CheckResult>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].passed != b[i].passed || a[i].cases != b[i].cases || a[i].worst != b[i].worst) return false;
  }
  return true;
}

bool same_audit(const bar::AuditResult& a, const bar::AuditResult& b) {
  return a.lhs == b.lhs && a.rhs == b.rhs && a.rhs_se == b.rhs_se && a.event_prob == b.event_prob &&
         a.event_prob_alt == b.event_prob_alt && a.mean_pulls == b.mean_pulls;
}

void check_list(Criterion& c, const std::vector<bar::verify::CheckResult>& checks) {
  for (const auto& r : checks) {
    c.require(r.passed, r.name + " (" + std::to_string(r.cases) + " cases, worst " + fmt(r.worst, 4) + ")" +
                            (r.detail.empty() ? "" : " " + r.detail));
  }
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  std::vector<Criterion> results;
  std::vector<std::pair<std::string, std::string>> csvs;  // (name, parallelism-1 CSV)

  auto timed = [](auto&& fn) {
    const auto t0 = clock::now();
    fn();
    return std::chrono::duration<double>(clock::now() - t0).count();
  };

  {
    Criterion c{1, "OSMD regret on H1(n=10, eps=0.1), T=10^4, 1000 trials <= sqrt(2nT) = 447.21"};
    GateRun r;
    const double secs = timed([&] { r = run_config("osmd_h1.json", 1); });
    add_gates(c, r.summary);
    c.require(all_samples(r.summary, 10000), "every trial used exactly T = 10000 rounds");
    c.notes.push_back("mean regret " + fmt(r.summary.regret.mean) + " se " + fmt(r.summary.regret.standard_error) +
                      ", " + fmt(secs, 3) + " s");
    csvs.emplace_back("osmd_h1.json", r.csv);
    results.push_back(c);
  }
  {
    Criterion c{2, "FindBest gap on (0.7, 0.5 x4), T=2000, 5000 trials <= sqrt(2n/T) = 0.07071"};
    GateRun r;
    const double secs = timed([&] { r = run_config("find_best.json", 1); });
    add_gates(c, r.summary);
    c.notes.push_back("mean gap " + fmt(r.summary.gap.mean) + " se " + fmt(r.summary.gap.standard_error) + ", " +
                      fmt(secs, 3) + " s");
    csvs.emplace_back("find_best.json", r.csv);
    results.push_back(c);
  }
  {
    Criterion c{3, "PAC-BAR on H1(n=10, 0.1), (eps=0.1, delta=0.2, m=4), 2000 trials: Wilson upper <= 0.2, exact sample totals"};
    GateRun r;
    const double secs = timed([&] { r = run_config("pac_bar.json", 1); });
    add_gates(c, r.summary);
    // Trials whose survivors halved exactly must match the nominal closed form.
    const auto cfg = load("pac_bar.json", 1);
    const bar::PacParams params{*cfg.eps, *cfg.delta, *cfg.m};
    const auto nominal = bar::median_elimination_nominal_samples(10 - params.m + 1, params.eps,
                                                                 bar::pac_bar_inner_delta(10, params));
    std::uint64_t nominal_trials = 0, nominal_mismatch = 0;
    for (const auto& o : r.outcomes) {
      if (!o.nominal_schedule) continue;
      ++nominal_trials;
      if (o.record.samples_used != nominal) ++nominal_mismatch;
    }
    c.require(nominal_mismatch == 0, "halving-schedule trials (" + std::to_string(nominal_trials) +
                                         ") use exactly " + std::to_string(nominal) + " samples");
    c.notes.push_back("failures " + std::to_string(r.summary.failures) + "/2000, Wilson upper " +
                      fmt(r.summary.failure_rate.upper) + ", " + fmt(secs, 3) + " s");
    csvs.emplace_back("pac_bar.json", r.csv);
    results.push_back(c);
  }
  {
    Criterion c{4, "r-BAR sampling n=10, m=3, r=0.1: T* = 1458; gap on H1(eps=0.15), 5000 trials < 0.1"};
    c.require(bar::r_bar_sample_budget(10, 3, 0.1) == 1458, "closed-form T* = 1458");
    GateRun r;
    const double secs = timed([&] { r = run_config("rbar_sample.json", 1); });
    add_gates(c, r.summary);
    c.require(all_samples(r.summary, 1458), "every trial used exactly 1458 samples");
    c.notes.push_back("mean gap " + fmt(r.summary.gap.mean) + ", " + fmt(secs, 3) + " s");
    csvs.emplace_back("rbar_sample.json", r.csv);
    results.push_back(c);
  }
  {
    Criterion c{5, "r-BAR regret n=10, m=3, r=0.1: L1=200, L2=1800; gap < 0.1 and regret <= 306.5"};
    const auto b = bar::r_bar_regret_budgets(10, 3, 0.1);
    c.require(b.first == 200 && b.second == 1800, "L1 = " + std::to_string(b.first) + ", L2 = " + std::to_string(b.second));
    const double bound = bar::r_bar_regret_bound(10, 3, 0.1);
    c.require(std::abs(bound - 306.4911064067352) < 1e-9, "three-term bound = " + fmt(bound, 10));
    GateRun r;
    const double secs = timed([&] { r = run_config("rbar_regret.json", 1); });
    add_gates(c, r.summary);
    c.require(all_samples(r.summary, 2000), "every trial used exactly L1 + L2 = 2000 samples");
    c.notes.push_back("mean gap " + fmt(r.summary.gap.mean) + ", mean regret " + fmt(r.summary.regret.mean) + ", " +
                      fmt(secs, 3) + " s");
    csvs.emplace_back("rbar_regret.json", r.csv);
    results.push_back(c);
  }

  std::vector<bar::verify::CheckResult> kl_checks, osmd_checks;
  {
    Criterion c{6, "KL facts and lemmas on 0.01 grids and 10^4 random draws, slack 1e-12"};
    const double secs = timed([&] { kl_checks = bar::verify::kl_suite(2024, 10000); });
    check_list(c, kl_checks);
    c.notes.push_back(fmt(secs, 3) + " s");
    results.push_back(c);
  }
  {
    Criterion c{7, "mirror step vs brute-force grid minimization on 100 random 2- and 3-arm triples (1e-5)"};
    const double secs = timed([&] { osmd_checks = bar::verify::osmd_suite(2024, 100); });
    check_list(c, osmd_checks);
    c.notes.push_back(fmt(secs, 3) + " s");
    results.push_back(c);
  }

  bar::AuditResult audit;
  const auto audit_cfg = bar::load_audit_config(std::string(BAR_CONFIG_DIR) + "/audit_h1_h3.json");
  {
    Criterion c{8, "likelihood-ratio audit H1 vs H3 (n=4, eps=0.1), round robin 100/arm, 10^4 trials"};
    const double secs = timed([&] { audit = bar::run_audit(audit_cfg); });
    const double closed_form = 100.0 * bar::kl::bernoulli_kl(0.5, 0.7);
    c.require(std::abs(audit.lhs - closed_form) < 1e-9, "lhs = 100 d(0.5, 0.7) = " + fmt(audit.lhs, 8));
    c.require(audit.lhs >= audit.rhs - 3.0 * audit.rhs_se,
              "lhs " + fmt(audit.lhs) + " >= rhs - 3 se = " + fmt(audit.rhs - 3.0 * audit.rhs_se));
    c.notes.push_back("P[E] " + fmt(audit.event_prob) + " vs " + fmt(audit.event_prob_alt) + ", " + fmt(secs, 3) + " s");
    results.push_back(c);
  }
  {
    Criterion c{9, "every criterion re-run at parallelism 1 and 8 gives identical output"};
    const double secs = timed([&] {
      for (const auto& [name, serial] : csvs) {
        const auto parallel = run_config(name.c_str(), 8).csv;
        c.require(parallel == serial, name + " CSV identical (" + std::to_string(serial.size()) + " bytes)");
      }
      c.require(same_checks(kl_checks, bar::verify::kl_suite(2024, 10000)), "KL suite results identical");
      c.require(same_checks(osmd_checks, bar::verify::osmd_suite(2024, 100)), "mirror-step suite results identical");
      auto cfg8 = audit_cfg;
      cfg8.parallelism = 8;
      c.require(same_audit(audit, bar::run_audit(cfg8)), "audit estimates identical");
    });
    c.notes.push_back(fmt(secs, 3) + " s");
    results.push_back(c);
  }

  bool all = true;
  for (const auto& c : results) {
    for (const auto& n : c.notes) std::cout << "    " << n << '\n';
    std::cout << (c.passed ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title << "\n\n";
    all = all && c.passed;
  }
  std::cout << (all ? "all criteria passed" : "some criteria FAILED") << '\n';
  return all ? 0 : 1;
}
