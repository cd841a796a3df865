#include "bar/kl.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bar/errors.hpp"

namespace bar::kl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InputError(std::string(what) + " must lie in [0,1], got " + std::to_string(v));
  }
}

// p * log(p / q) with 0 log 0 = 0 and p > 0, q = 0 -> +inf.
double xlogx_over_y(double p, double q) {
  if (p == 0.0) return 0.0;
  if (q == 0.0) return kInf;
  return p * std::log(p / q);
}

}  // namespace

double bernoulli_kl(double x, double y) {
  require_unit(x, "bernoulli_kl: x");
  require_unit(y, "bernoulli_kl: y");
  if (x == y) return 0.0;
  return xlogx_over_y(x, y) + xlogx_over_y(1.0 - x, 1.0 - y);
}

KlPair::KlPair(double x, double y) : x_(x), y_(y) {
  require_unit(x, "KlPair: x");
  require_unit(y, "KlPair: y");
}

InequalitySides kl_sum_lower_bound(std::span<const double> xs, double b) {
  if (xs.empty()) throw InputError("kl_sum_lower_bound: empty vector");
  require_unit(b, "kl_sum_lower_bound: b");
  double total = 0.0;
  for (double x : xs) {
    require_unit(x, "kl_sum_lower_bound: x_i");
    total += x;
  }
  const double n = static_cast<double>(xs.size());
  const double avg = total / n;
  if (!(avg < b)) {
    throw InputError("kl_sum_lower_bound: average " + std::to_string(avg) +
                     " must be below b=" + std::to_string(b));
  }
  double lhs = 0.0;
  for (double x : xs) {
    if (x < b) lhs += bernoulli_kl(x, b);
  }
  return {lhs, n * bernoulli_kl(avg, b)};
}

InequalitySides bar_kl_lower_bound(double a, double b) {
  if (!(a > 0.0 && a < b && b < 1.0)) {
    throw InputError("bar_kl_lower_bound: need 0 < a < b < 1");
  }
  const double r = (b - a) / a;
  const double factor = 1.0 - 1.0 / (1.0 + r / (2.0 + r));
  return {bernoulli_kl(b, a), factor * b * std::log(b / a)};
}

double bai_kl_scale(double delta, std::size_t n) {
  return (1.0 - delta) / 2.0 - 1.0 / (2.0 * static_cast<double>(n));
}

double bai_kl_value(double delta, std::size_t n) {
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("bai_kl_value: delta must be in (0,1)");
  if (n == 0) throw InputError("bai_kl_value: n must be positive");
  const double keep = 1.0 - delta;
  const double nd = static_cast<double>(n);
  if (keep * nd < 1.0 - 1e-12) {
    throw InputError("bai_kl_value: requires (1-delta) >= 1/n");
  }
  // Below the exact boundary only by rounding: the arguments coincide.
  if (keep * nd <= 1.0) return 0.0;
  return bernoulli_kl(keep / 2.0 + 1.0 / (2.0 * nd), keep);
}

bool log_inequalities_check(double x, double slack) {
  if (!(x > -1.0)) return true;
  const double lhs = std::log1p(x);
  bool ok = lhs >= x / (1.0 + x) - slack;
  if (x > 0.0) ok = ok && lhs >= 2.0 * x / (2.0 + x) - slack;
  if (x <= 0.0) ok = ok && lhs >= x / (1.0 + x) * (2.0 + x) / 2.0 - slack;
  return ok;
}

InequalitySides log_sum_sides(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("log_sum_sides: length mismatch");
  double lhs = 0.0;
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] >= 0.0) || !(b[i] >= 0.0)) throw InputError("log_sum_sides: negative entry");
    lhs += xlogx_over_y(a[i], b[i]);
    sum_a += a[i];
    sum_b += b[i];
  }
  return {lhs, xlogx_over_y(sum_a, sum_b)};
}

}  // namespace bar::kl
