#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bar/config.hpp"
#include "bar/csv.hpp"
#include "bar/errors.hpp"
#include "bar/experiment.hpp"
#include "doctest.h"

namespace {

bar::ExperimentConfig small(bar::Algorithm a) {
  bar::ExperimentConfig c;
  c.algorithm = a;
  c.instance = bar::HardFamilySpec{6, 0.2, std::nullopt};
  c.trials = 40;
  c.seed = 17;
  switch (a) {
    case bar::Algorithm::osmd:
    case bar::Algorithm::find_best:
      c.rounds = 300;
      c.osmd.rounds = 300;
      break;
    case bar::Algorithm::median_elimination:
      c.eps = 0.3;
      c.delta = 0.2;
      break;
    case bar::Algorithm::pac_bar:
      c.eps = 0.3;
      c.delta = 0.2;
      c.m = 3;
      break;
    case bar::Algorithm::rbar_sample:
    case bar::Algorithm::rbar_regret:
      c.m = 3;
      c.r = 0.5;
      break;
  }
  return c;
}

const bar::Algorithm kAll[] = {bar::Algorithm::osmd, bar::Algorithm::find_best,
                               bar::Algorithm::median_elimination, bar::Algorithm::pac_bar,
                               bar::Algorithm::rbar_sample, bar::Algorithm::rbar_regret};

}  // namespace

TEST_CASE("every algorithm runs with clean structure and accounting") {
  for (auto a : kAll) {
    const auto c = small(a);
    INFO(bar::to_string(a));
    const auto outcomes = bar::run_trials(c);
    REQUIRE(outcomes.size() == 40);
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const auto& o = outcomes[i];
      CHECK(o.record.trial_id == i);
      CHECK(o.structure_error.empty());
      CHECK(o.record.samples_used == o.expected_samples);
      CHECK(o.record.n == 6);
      CHECK(o.record.algorithm == std::string(bar::to_string(a)));
    }
    const auto s = bar::summarize(c, outcomes);
    CHECK(s.structure_violations == 0);
    CHECK(s.accounting_mismatches == 0);
    CHECK(s.records.size() == 40);
    CHECK_FALSE(s.gates.empty());
  }
}

TEST_CASE("osmd rows use m = 0 and a zero gap") {
  const auto outcomes = bar::run_trials(small(bar::Algorithm::osmd));
  for (const auto& o : outcomes) {
    CHECK(o.record.m == 0);
    CHECK(o.record.realized_gap == 0.0);
    CHECK(o.record.contains_eps_optimal);
    CHECK(o.record.samples_used == 300);
  }
}

TEST_CASE("a trial depends only on seed and trial id") {
  const auto c = small(bar::Algorithm::pac_bar);
  const auto instance = bar::build_instance(c.instance);
  const auto a = bar::run_trial(c, instance, 7);
  const auto b = bar::run_trial(c, instance, 7);
  CHECK(a.record == b.record);
  CHECK(a.retained == b.retained);
  const auto all = bar::run_trials(c);
  CHECK(all[7].record == a.record);
}

TEST_CASE("parallelism does not change results") {
  for (auto a : kAll) {
    auto c = small(a);
    c.parallelism = 1;
    const auto serial = bar::summarize(c, bar::run_trials(c));
    c.parallelism = 5;
    const auto parallel = bar::summarize(c, bar::run_trials(c));
    CHECK(bar::to_csv(serial.records) == bar::to_csv(parallel.records));
    CHECK(serial.regret.mean == parallel.regret.mean);
    CHECK(serial.gap.standard_error == parallel.gap.standard_error);
  }
}

TEST_CASE("eps-optimality tolerates the 0.6 - 0.5 rounding") {
  // With eps = 0.1 on (0.6, 0.5) an arm with gap 0.09999999999999998 is not eps-optimal.
  bar::ExperimentConfig c;
  c.algorithm = bar::Algorithm::find_best;
  c.instance = std::vector<double>{0.6, 0.5};
  c.rounds = 0;
  c.eps = 0.1;
  c.trials = 200;
  const auto outcomes = bar::run_trials(c);
  std::size_t picked_second = 0;
  for (const auto& o : outcomes) {
    if (o.retained.front() == 1) {
      ++picked_second;
      CHECK_FALSE(o.record.contains_eps_optimal);
    } else {
      CHECK(o.record.contains_eps_optimal);
    }
  }
  CHECK(picked_second > 0);
}

TEST_CASE("run_experiment writes the csv and reports write failures") {
  auto c = small(bar::Algorithm::rbar_sample);
  const auto path = std::filesystem::temp_directory_path() / "bar_experiment_test.csv";
  c.output_path = path.string();
  const auto s = bar::run_experiment(c);
  std::ifstream in(path);
  const auto back = bar::read_csv(in);
  CHECK(back == s.records);
  std::filesystem::remove(path);

  c.output_path = "/nonexistent/dir/out.csv";
  CHECK_THROWS_AS(bar::run_experiment(c), bar::IoError);

  std::ostringstream text;
  bar::print_summary(text, s);
  CHECK(text.str().find("PASS") != std::string::npos);
}

TEST_CASE("gates fail when the guarantee is violated") {
  // Paper-verbatim estimator on the hard instance misses the sqrt(2nT) regret gate.
  bar::ExperimentConfig c;
  c.algorithm = bar::Algorithm::osmd;
  c.instance = bar::HardFamilySpec{10, 0.1, std::nullopt};
  c.rounds = 10000;
  c.osmd.rounds = 10000;
  c.osmd.estimator = bar::EstimatorVariant::paper_verbatim;
  c.trials = 30;
  c.seed = 3;
  const auto s = bar::summarize(c, bar::run_trials(c));
  CHECK_FALSE(s.passed());
}

TEST_CASE("single-trial find-best on a one-arm instance") {
  bar::ExperimentConfig c;
  c.algorithm = bar::Algorithm::find_best;
  c.instance = std::vector<double>{0.3};
  c.rounds = 10;
  c.trials = 1;
  const auto s = bar::summarize(c, bar::run_trials(c));
  REQUIRE(s.records.size() == 1);
  CHECK(s.records[0].realized_gap == 0.0);
  CHECK(s.records[0].realized_regret == 0.0);
}

TEST_CASE("same config twice gives byte-identical csv") {
  const auto c = small(bar::Algorithm::rbar_regret);
  CHECK(bar::to_csv(bar::summarize(c, bar::run_trials(c)).records) ==
        bar::to_csv(bar::summarize(c, bar::run_trials(c)).records));
}
