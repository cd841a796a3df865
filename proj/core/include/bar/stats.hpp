#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace bar {

/// Two-sided 95% standard normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t count = 0;

  /// mean + k * standard_error
  double upper(double k = 3.0) const noexcept { return mean + k * standard_error; }
  double lower(double k = 3.0) const noexcept { return mean - k * standard_error; }
};

/// Sample mean and its standard error (sample sd / sqrt(count)); folds in input order.
MeanEstimate estimate_mean(std::span<const double> values);

struct ProportionInterval {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Wilson score interval for successes out of trials (trials > 0).
ProportionInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

}  // namespace bar
