#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bar/errors.hpp"

namespace bar::oracle {

double mirror_objective(std::span<const double> q, std::span<const double> est, double eta,
                        std::span<const double> p) {
  double linear = 0.0;
  double f_p = 0.0;
  double f_q = 0.0;
  double grad_term = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    linear += p[i] * est[i];
    f_p += -2.0 * std::sqrt(p[i]);
    f_q += -2.0 * std::sqrt(q[i]);
    grad_term += (-1.0 / std::sqrt(q[i])) * (p[i] - q[i]);
  }
  return linear + (f_p - f_q - grad_term) / eta;
}

std::vector<double> grid_minimize_mirror(std::span<const double> q, std::span<const double> est,
                                         double eta, double resolution) {
  const std::size_t k = q.size();
  if (k != 2 && k != 3) throw InputError("grid_minimize_mirror: supports 2 or 3 arms");

  std::vector<double> best(k, 1.0 / static_cast<double>(k));
  double best_value = mirror_objective(q, est, eta, best);
  std::vector<double> p(k);

  double step = 0.01;
  double lo0 = 0.0, hi0 = 1.0, lo1 = 0.0, hi1 = 1.0;
  for (;;) {
    const auto count0 = static_cast<long>(std::floor((hi0 - lo0) / step + 0.5));
    const auto count1 = k == 3 ? static_cast<long>(std::floor((hi1 - lo1) / step + 0.5)) : 0L;
    std::vector<double> center = best;
    for (long a = 0; a <= count0; ++a) {
      p[0] = std::min(1.0, lo0 + static_cast<double>(a) * step);
      for (long b = 0; b <= count1; ++b) {
        if (k == 2) {
          p[1] = 1.0 - p[0];
        } else {
          p[1] = std::min(1.0, lo1 + static_cast<double>(b) * step);
          p[2] = 1.0 - p[0] - p[1];
          if (p[2] < 0.0) continue;
        }
        const double v = mirror_objective(q, est, eta, p);
        if (v < best_value) {
          best_value = v;
          center = p;
        }
      }
    }
    best = center;
    if (step <= resolution) break;
    const double window = 5.0 * step;
    step /= 10.0;
    lo0 = std::max(0.0, best[0] - window);
    hi0 = std::min(1.0, best[0] + window);
    if (k == 3) {
      lo1 = std::max(0.0, best[1] - window);
      hi1 = std::min(1.0, best[1] + window);
    }
  }
  return best;
}

std::vector<double> grid_minimize_potential3(double spacing) {
  const auto steps = static_cast<long>(std::round(1.0 / spacing));
  std::vector<double> best(3);
  double best_value = std::numeric_limits<double>::infinity();
  for (long a = 0; a <= steps; ++a) {
    for (long b = 0; a + b <= steps; ++b) {
      const double p0 = static_cast<double>(a) / static_cast<double>(steps);
      const double p1 = static_cast<double>(b) / static_cast<double>(steps);
      const double p2 = static_cast<double>(steps - a - b) / static_cast<double>(steps);
      const double v = -2.0 * (std::sqrt(p0) + std::sqrt(p1) + std::sqrt(p2));
      if (v < best_value) {
        best_value = v;
        best = {p0, p1, p2};
      }
    }
  }
  return best;
}

double wilson_bound_by_inversion(std::uint64_t successes, std::uint64_t trials, double z, bool upper) {
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  auto score_gap = [&](double p) { return (phat - p) * (phat - p) - z * z * p * (1.0 - p) / n; };
  // score_gap(phat) <= 0 and score_gap is >= 0 at the ends of [0,1].
  double inside = phat;
  double outside = upper ? 1.0 : 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (inside + outside);
    if (score_gap(mid) <= 0.0) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return 0.5 * (inside + outside);
}

std::vector<double> loss_estimate_reference(std::span<const double> q, std::size_t chosen,
                                            double loss, double eta, EstimatorVariant variant) {
  std::vector<double> out;
  out.reserve(q.size());
  const double qa = q[chosen];
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double root = std::sqrt(q[i]);
    const double correction = eta * qa / (8.0 * (q[i] + root));
    if (i != chosen) {
      out.push_back(-correction);
      continue;
    }
    double indicator = (loss - 0.5) + (eta / 8.0) + (eta / 8.0) / (q[i] + root);
    if (variant == EstimatorVariant::centered_importance_weighted) indicator = indicator / q[i];
    out.push_back(indicator - correction);
  }
  return out;
}

}  // namespace bar::oracle
