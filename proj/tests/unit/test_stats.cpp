#include <cmath>
#include <vector>

#include "bar/errors.hpp"
#include "bar/rng.hpp"
#include "bar/stats.hpp"
#include "doctest.h"
#include "oracle.hpp"

TEST_CASE("mean and standard error") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto e = bar::estimate_mean(v);
  CHECK(e.mean == 2.5);
  CHECK(e.count == 4);
  CHECK(e.standard_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK(e.upper() == doctest::Approx(2.5 + 3 * e.standard_error));
  CHECK(e.lower(1.0) == doctest::Approx(2.5 - e.standard_error));

  const auto one = bar::estimate_mean(std::vector<double>{7.0});
  CHECK(one.mean == 7.0);
  CHECK(one.standard_error == 0.0);
  const auto none = bar::estimate_mean(std::vector<double>{});
  CHECK(none.count == 0);
  CHECK(none.mean == 0.0);
}

TEST_CASE("Wilson frozen values") {
  // Closed form evaluated at 40 digits.
  const auto zero = bar::wilson_interval(0, 2000);
  CHECK(zero.estimate == 0.0);
  CHECK(zero.upper == doctest::Approx(0.001917047281252934).epsilon(1e-12));
  CHECK(zero.lower == doctest::Approx(0.0).epsilon(1e-12));
  const auto mid = bar::wilson_interval(13, 100);
  CHECK(mid.lower == doctest::Approx(0.07757167427240511).epsilon(1e-12));
  CHECK(mid.upper == doctest::Approx(0.2098035144007643).epsilon(1e-12));
  const auto all = bar::wilson_interval(5, 5);
  CHECK(all.lower == doctest::Approx(0.5655175352168252).epsilon(1e-12));
  CHECK(all.upper == doctest::Approx(1.0));
  CHECK_THROWS_AS(bar::wilson_interval(0, 0), bar::InputError);
  CHECK_THROWS_AS(bar::wilson_interval(3, 2), bar::InputError);
}

TEST_CASE("Wilson closed form agrees with score-equation inversion") {
  bar::RngStream rng(2024, 0);
  for (int i = 0; i < 50; ++i) {
    const std::uint64_t trials = 1 + rng.uniform_below(5000);
    const std::uint64_t successes = rng.uniform_below(trials + 1);
    const auto w = bar::wilson_interval(successes, trials);
    INFO(successes << "/" << trials);
    CHECK(std::abs(w.upper - bar::oracle::wilson_bound_by_inversion(successes, trials, bar::kZ95, true)) < 1e-9);
    CHECK(std::abs(w.lower - bar::oracle::wilson_bound_by_inversion(successes, trials, bar::kZ95, false)) < 1e-9);
  }
}
