#pragma once

#include <cstddef>
#include <span>

namespace bar::kl {

/// Default slack for double-precision inequality checks.
inline constexpr double kSlack = 1e-12;

/*
KL divergence between Bernoulli(x) and Bernoulli(y), natural log:

    d(x, y) = x log(x/y) + (1-x) log((1-x)/(1-y))

with 0 log 0 = 0. Returns +infinity when y is 0 or 1 and x differs from it.
Throws InputError when x or y lies outside [0,1].
*/
double bernoulli_kl(double x, double y);

/// A validated pair of Bernoulli means.
class KlPair {
 public:
  KlPair(double x, double y);
  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }
  double divergence() const { return bernoulli_kl(x_, y_); }

 private:
  double x_;
  double y_;
};

/// Both sides of an inequality of the form lhs >= rhs.
struct InequalitySides {
  double lhs;
  double rhs;

  bool holds(double slack = kSlack) const noexcept { return lhs >= rhs - slack; }
  double margin() const noexcept { return lhs - rhs; }
};

/*
Sum-over-below-threshold bound. For xs in [0,1]^n with average a < b <= 1:
    lhs = sum_{i: x_i < b} d(x_i, b),   rhs = n * d(a, b),   lhs >= rhs.
Throws InputError if xs is empty, any entry leaves [0,1], or a >= b.
*/
InequalitySides kl_sum_lower_bound(std::span<const double> xs, double b);

/*
For 0 < a < b < 1 with r = (b-a)/a:
    lhs = d(b, a),   rhs = (1 - 1/(1 + r/(2+r))) * b * log(b/a).
*/
InequalitySides bar_kl_lower_bound(double a, double b);

/*
d((1-delta)/2 + 1/(2n), 1-delta). Requires delta in (0,1) and (1-delta)*n >= 1
(equality, up to 1e-12 relative, gives 0). Throws InputError otherwise.
*/
double bai_kl_value(double delta, std::size_t n);

/// (1-delta)/2 - 1/(2n), the scale that bai_kl_value is bounded below by.
double bai_kl_scale(double delta, std::size_t n);

/*
The three log inequalities, each tested only on its own domain:
  log(1+x) >= x/(1+x)                   for x > -1
  log(1+x) >= 2x/(2+x)                  for x > 0
  log(1+x) >= x/(1+x) * (2+x)/2         for -1 < x <= 0
Returns true iff every applicable branch holds within `slack`. x <= -1 has no
applicable branch and returns true.
*/
bool log_inequalities_check(double x, double slack = kSlack);

/// Log-sum inequality sides: sum a_i log(a_i/b_i) >= A log(A/B) for a, b >= 0.
InequalitySides log_sum_sides(std::span<const double> a, std::span<const double> b);

}  // namespace bar::kl
