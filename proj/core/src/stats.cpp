#include "bar/stats.hpp"

#include <algorithm>
#include <cmath>

#include "bar/errors.hpp"

namespace bar {

MeanEstimate estimate_mean(std::span<const double> values) {
  MeanEstimate out;
  out.count = values.size();
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  const double n = static_cast<double>(values.size());
  out.standard_error = std::sqrt(ss / (n - 1.0) / n);
  return out;
}

ProportionInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw InputError("wilson_interval: trials must be positive");
  if (successes > trials) throw InputError("wilson_interval: successes exceed trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {p, std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace bar
