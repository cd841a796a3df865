#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "bar/kl.hpp"
#include "bar/osmd.hpp"
#include "bar/rng.hpp"
#include "oracle.hpp"

namespace bar::verify {

namespace {

using kl::bernoulli_kl;
using kl::kSlack;

constexpr int kGridSteps = 100;  // 0.01 grid on [0,1]

double grid_point(int i) { return static_cast<double>(i) / kGridSteps; }

// Accumulates lhs >= rhs - slack outcomes for one named inequality.
class InequalityTally {
 public:
  explicit InequalityTally(std::string name) { result_.name = std::move(name); result_.worst = std::numeric_limits<double>::infinity(); }

  void add(double lhs, double rhs, const char* where) {
    ++result_.cases;
    double margin = lhs - rhs;
    if (std::isnan(margin)) margin = (lhs == rhs) ? 0.0 : -std::numeric_limits<double>::infinity();
    if (margin < result_.worst) result_.worst = margin;
    if (!(lhs >= rhs - kSlack) && !(std::isinf(lhs) && lhs > 0)) {
      if (result_.passed) {
        std::ostringstream msg;
        msg << "first violation (" << where << "): lhs=" << lhs << " rhs=" << rhs;
        result_.detail = msg.str();
      }
      result_.passed = false;
    }
  }
  void flag(bool ok, const std::string& what) {
    ++result_.cases;
    if (!ok && result_.passed) {
      result_.passed = false;
      result_.detail = what;
    }
  }

  CheckResult finish(std::string note = {}) {
    if (result_.passed && !note.empty()) result_.detail = std::move(note);
    if (std::isinf(result_.worst) && result_.worst > 0) result_.worst = 0.0;
    return std::move(result_);
  }

 private:
  CheckResult result_;
};

CheckResult nonnegativity(RngStream& rng, std::size_t draws) {
  InequalityTally t("KL non-negativity, zero iff equal");
  for (int i = 0; i <= kGridSteps; ++i) {
    for (int j = 0; j <= kGridSteps; ++j) {
      const double v = bernoulli_kl(grid_point(i), grid_point(j));
      t.add(v, 0.0, "grid");
      if (i != j && i > 0 && i < kGridSteps && j > 0 && j < kGridSteps) {
        t.flag(v > 0.0, "d(x,y) = 0 with x != y on the grid");
      }
      if (i == j) t.flag(v == 0.0, "d(x,x) != 0");
    }
  }
  for (std::size_t s = 0; s < draws; ++s) t.add(bernoulli_kl(rng.uniform(), rng.uniform()), 0.0, "random");
  return t.finish();
}

CheckResult convexity_first(RngStream& rng, std::size_t draws) {
  InequalityTally t("convexity of d(., y)");
  auto check = [&](double x1, double x2, double y, double lam, const char* where) {
    const double mix = bernoulli_kl(lam * x1 + (1.0 - lam) * x2, y);
    t.add(lam * bernoulli_kl(x1, y) + (1.0 - lam) * bernoulli_kl(x2, y), mix, where);
  };
  for (int a = 0; a <= kGridSteps; ++a)
    for (int b = a + 1; b <= kGridSteps; ++b)
      for (int c = 0; c <= kGridSteps; ++c)
        for (int l = 1; l <= 9; l += 2) check(grid_point(a), grid_point(b), grid_point(c), l / 10.0, "grid");
  for (std::size_t s = 0; s < draws; ++s) check(rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform(), "random");
  return t.finish();
}

CheckResult convexity_second(RngStream& rng, std::size_t draws) {
  InequalityTally t("convexity of d(x, .)");
  auto check = [&](double y1, double y2, double x, double lam, const char* where) {
    const double mix = bernoulli_kl(x, lam * y1 + (1.0 - lam) * y2);
    t.add(lam * bernoulli_kl(x, y1) + (1.0 - lam) * bernoulli_kl(x, y2), mix, where);
  };
  for (int a = 0; a <= kGridSteps; ++a)
    for (int b = a + 1; b <= kGridSteps; ++b)
      for (int c = 0; c <= kGridSteps; ++c)
        for (int l = 1; l <= 9; l += 2) check(grid_point(a), grid_point(b), grid_point(c), l / 10.0, "grid");
  for (std::size_t s = 0; s < draws; ++s) check(rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform(), "random");
  return t.finish();
}

CheckResult monotonicity(RngStream& rng, std::size_t draws) {
  InequalityTally t("interval monotonicity d(a,b) >= d(x,y) for a<=x<=y<=b");
  for (int a = 0; a <= kGridSteps; ++a)
    for (int x = a; x <= kGridSteps; ++x)
      for (int y = x; y <= kGridSteps; ++y) {
        const double inner = bernoulli_kl(grid_point(x), grid_point(y));
        for (int b = y; b <= kGridSteps; ++b) t.add(bernoulli_kl(grid_point(a), grid_point(b)), inner, "grid");
      }
  for (std::size_t s = 0; s < draws; ++s) {
    double v[4] = {rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
    std::sort(v, v + 4);
    t.add(bernoulli_kl(v[0], v[3]), bernoulli_kl(v[1], v[2]), "random");
  }
  return t.finish();
}

CheckResult log_inequalities(RngStream& rng, std::size_t draws) {
  InequalityTally t("log(1+x) lower bounds");
  // x in (-1, 10] on a 0.01 grid, then random points on (-1, 10].
  for (int i = -99; i <= 1000; ++i) {
    const double x = i / 100.0;
    t.flag(kl::log_inequalities_check(x), "violated at x=" + std::to_string(x));
  }
  for (std::size_t s = 0; s < draws; ++s) {
    const double x = -1.0 + 11.0 * rng.uniform();
    if (x <= -1.0) continue;
    t.flag(kl::log_inequalities_check(x), "violated at x=" + std::to_string(x));
  }
  return t.finish();
}

CheckResult log_sum(RngStream& rng, std::size_t draws) {
  InequalityTally t("log-sum inequality");
  double a[2], b[2];
  for (int i = 0; i <= kGridSteps; ++i)
    for (int j = 0; j <= kGridSteps; ++j)
      for (int k = 0; k <= kGridSteps; ++k)
        for (int l = 0; l <= kGridSteps; ++l) {
          a[0] = grid_point(i); a[1] = grid_point(j);
          b[0] = grid_point(k); b[1] = grid_point(l);
          const auto sides = kl::log_sum_sides(a, b);
          t.add(sides.lhs, sides.rhs, "grid");
        }
  std::vector<double> va, vb;
  for (std::size_t s = 0; s < draws; ++s) {
    const auto len = 1 + rng.uniform_below(20);
    va.resize(len);
    vb.resize(len);
    for (std::size_t i = 0; i < len; ++i) {
      va[i] = 5.0 * rng.uniform();
      vb[i] = 5.0 * rng.uniform();
    }
    const auto sides = kl::log_sum_sides(va, vb);
    t.add(sides.lhs, sides.rhs, "random");
  }
  return t.finish();
}

CheckResult kl_sum(RngStream& rng, std::size_t draws) {
  InequalityTally t("averaging bound sum_{x_i<b} d(x_i,b) >= n d(avg,b)");
  double xs[2];
  for (int i = 0; i <= kGridSteps; ++i)
    for (int j = 0; j <= kGridSteps; ++j)
      for (int b = 0; b <= kGridSteps; ++b) {
        if (i + j >= 2 * b) continue;  // average must be strictly below b
        xs[0] = grid_point(i);
        xs[1] = grid_point(j);
        const auto sides = kl::kl_sum_lower_bound(xs, grid_point(b));
        t.add(sides.lhs, sides.rhs, "grid");
      }
  std::vector<double> v;
  for (std::size_t s = 0; s < draws; ++s) {
    const auto len = 1 + rng.uniform_below(20);
    v.resize(len);
    double total = 0.0;
    for (auto& x : v) {
      x = rng.uniform();
      total += x;
    }
    const double avg = total / static_cast<double>(len);
    const double b = avg + (1.0 - avg) * rng.uniform();
    if (!(b > avg)) continue;
    const auto sides = kl::kl_sum_lower_bound(v, b);
    t.add(sides.lhs, sides.rhs, "random");
  }
  return t.finish();
}

CheckResult bar_kl(RngStream& rng, std::size_t draws) {
  InequalityTally t("ratio bound d(b,a) >= (1 - 1/(1+r/(2+r))) b log(b/a)");
  for (int i = 1; i < kGridSteps; ++i)
    for (int j = i + 1; j < kGridSteps; ++j) {
      const auto sides = kl::bar_kl_lower_bound(grid_point(i), grid_point(j));
      t.add(sides.lhs, sides.rhs, "grid");
    }
  for (std::size_t s = 0; s < draws; ++s) {
    double a = rng.uniform(), b = rng.uniform();
    if (a > b) std::swap(a, b);
    if (!(a > 0.0 && a < b && b < 1.0)) continue;
    const auto sides = kl::bar_kl_lower_bound(a, b);
    t.add(sides.lhs, sides.rhs, "random");
  }
  return t.finish();
}

CheckResult twelve_eps_squared(RngStream& rng, std::size_t draws) {
  InequalityTally t("d(1/2, 1/2+2eps) <= 12 eps^2 on (0, 1/8]");
  for (int i = 1; i <= 1250; ++i) {
    const double eps = i / 10000.0;
    t.add(12.0 * eps * eps, bernoulli_kl(0.5, 0.5 + 2.0 * eps), "grid");
  }
  for (std::size_t s = 0; s < draws; ++s) {
    const double eps = 0.125 * (1.0 - rng.uniform());  // (0, 1/8]
    t.add(12.0 * eps * eps, bernoulli_kl(0.5, 0.5 + 2.0 * eps), "random");
  }
  return t.finish();
}

double bai_ratio(double delta, std::size_t n) {
  return kl::bai_kl_value(delta, n) / kl::bai_kl_scale(delta, n);
}

CheckResult bai_calibrated(RngStream& rng, std::size_t draws) {
  const auto cal = calibrate_bai_constant();
  InequalityTally t("calibrated constant d((1-delta)/2+1/(2n), 1-delta) >= c ((1-delta)/2-1/(2n))");
  for (std::size_t s = 0; s < draws; ++s) {
    const auto n = static_cast<std::size_t>(3 + rng.uniform_below(10000 - 2));
    const double floor_keep = 2.0 / static_cast<double>(n);
    const double keep = floor_keep + (1.0 - floor_keep) * rng.uniform();
    const double delta = 1.0 - keep;
    if (!(delta > 0.0) || keep * static_cast<double>(n) < 2.0) continue;
    t.add(bai_ratio(delta, n), cal.constant - 1e-9, "random");
  }
  std::ostringstream note;
  note << std::setprecision(10) << "calibrated c=" << cal.constant << " on (1-delta) n >= 2, n <= 10^4 (min at n="
       << cal.argmin_n << ")";
  return t.finish(note.str());
}

CheckResult mirror_vs_grid(RngStream& rng, std::size_t triples) {
  CheckResult r{"mirror_step agrees with grid minimization (2 and 3 arms, 1e-5)", true, 0, 0.0, {}};
  for (std::size_t s = 0; s < triples; ++s) {
    const std::size_t k = s % 2 == 0 ? 2 : 3;
    std::vector<double> q(k), est(k);
    double total = 0.0;
    for (auto& w : q) {
      w = 0.05 + rng.uniform();
      total += w;
    }
    for (auto& w : q) w /= total;
    for (auto& e : est) e = -2.0 + 4.0 * rng.uniform();
    const double eta = 0.05 + 0.95 * rng.uniform();

    const auto fast = mirror_step(SimplexDistribution(q), est, eta, 1e-12);
    const auto brute = oracle::grid_minimize_mirror(q, est, eta);
    double err = 0.0;
    for (std::size_t i = 0; i < k; ++i) err = std::max(err, std::abs(fast[i] - brute[i]));
    ++r.cases;
    r.worst = std::max(r.worst, err);
    if (err > 1e-5 && r.passed) {
      r.passed = false;
      std::ostringstream msg;
      msg << "triple " << s << " (k=" << k << ", eta=" << eta << "): max coordinate error " << err;
      r.detail = msg.str();
    }
  }
  return r;
}

CheckResult simplex_invariants(RngStream& rng, std::size_t cases) {
  CheckResult r{"mirror_step keeps sum = 1 (1e-9) and all weights > 0", true, 0, 0.0, {}};
  for (std::size_t s = 0; s < cases; ++s) {
    const auto k = static_cast<std::size_t>(2 + rng.uniform_below(19));
    std::vector<double> q(k), est(k);
    double total = 0.0;
    for (auto& w : q) {
      w = std::pow(rng.uniform(), 4.0) + 1e-12;
      total += w;
    }
    for (auto& w : q) w /= total;
    // Importance-weighted estimates reach 1/q in magnitude.
    const auto chosen = static_cast<std::size_t>(rng.uniform_below(k));
    const double eta = 0.01 + rng.uniform();
    const auto loss = static_cast<double>(rng.bernoulli(0.5));
    est = loss_estimate(SimplexDistribution(q), chosen, loss, eta,
                        EstimatorVariant::centered_importance_weighted);
    const auto next = mirror_step(SimplexDistribution(q), est, eta);
    double sum = 0.0, min_w = 1.0;
    for (double w : next.weights()) {
      sum += w;
      min_w = std::min(min_w, w);
    }
    ++r.cases;
    r.worst = std::max(r.worst, std::abs(sum - 1.0));
    if ((std::abs(sum - 1.0) > 1e-9 || !(min_w > 0.0)) && r.passed) {
      r.passed = false;
      r.detail = "case " + std::to_string(s) + ": sum=" + std::to_string(sum) + " min=" + std::to_string(min_w);
    }
  }
  return r;
}

CheckResult translation_invariance(RngStream& rng, std::size_t cases) {
  CheckResult r{"mirror_step with constant estimate returns q", true, 0, 0.0, {}};
  for (std::size_t s = 0; s < cases; ++s) {
    const auto k = static_cast<std::size_t>(2 + rng.uniform_below(9));
    std::vector<double> q(k);
    double total = 0.0;
    for (auto& w : q) {
      w = 0.01 + rng.uniform();
      total += w;
    }
    for (auto& w : q) w /= total;
    const std::vector<double> est(k, -3.0 + 6.0 * rng.uniform());
    const auto next = mirror_step(SimplexDistribution(q), est, 0.05 + rng.uniform(), 1e-13);
    double err = 0.0;
    for (std::size_t i = 0; i < k; ++i) err = std::max(err, std::abs(next[i] - q[i]));
    ++r.cases;
    r.worst = std::max(r.worst, err);
    if (err > 1e-9 && r.passed) {
      r.passed = false;
      r.detail = "case " + std::to_string(s) + ": error " + std::to_string(err);
    }
  }
  return r;
}

CheckResult initial_distribution() {
  CheckResult r{"init_distribution(3) matches grid minimizer of F (1e-3 grid)", true, 1, 0.0, {}};
  const auto q = init_distribution(3);
  const auto brute = oracle::grid_minimize_potential3(1e-3);
  for (std::size_t i = 0; i < 3; ++i) r.worst = std::max(r.worst, std::abs(q[i] - brute[i]));
  r.passed = r.worst <= 1e-3;
  return r;
}

CheckResult estimator_dual(RngStream& rng, std::size_t cases) {
  CheckResult r{"loss_estimate matches independent re-implementation", true, 0, 0.0, {}};
  for (std::size_t s = 0; s < cases; ++s) {
    const auto k = static_cast<std::size_t>(1 + rng.uniform_below(8));
    std::vector<double> q(k);
    double total = 0.0;
    for (auto& w : q) {
      w = 0.01 + rng.uniform();
      total += w;
    }
    for (auto& w : q) w /= total;
    const auto chosen = static_cast<std::size_t>(rng.uniform_below(k));
    const double loss = rng.uniform();
    const double eta = rng.uniform();
    for (auto variant : {EstimatorVariant::paper_verbatim, EstimatorVariant::centered_importance_weighted}) {
      const auto a = loss_estimate(SimplexDistribution(q), chosen, loss, eta, variant);
      const auto b = oracle::loss_estimate_reference(q, chosen, loss, eta, variant);
      double err = 0.0;
      for (std::size_t i = 0; i < k; ++i) err = std::max(err, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
      ++r.cases;
      r.worst = std::max(r.worst, err);
      if (err > 1e-12 && r.passed) {
        r.passed = false;
        r.detail = "case " + std::to_string(s) + ": relative error " + std::to_string(err);
      }
    }
  }
  return r;
}

CheckResult centered_unbiased(RngStream& rng, std::size_t cases) {
  CheckResult r{"centered-importance-weighted estimate is unbiased at eta = 0", true, 0, 0.0, {}};
  for (std::size_t s = 0; s < cases; ++s) {
    const auto k = static_cast<std::size_t>(2 + rng.uniform_below(4));
    std::vector<double> q(k), mean_loss(k);
    double total = 0.0;
    for (auto& w : q) {
      w = 0.01 + rng.uniform();
      total += w;
    }
    for (auto& w : q) w /= total;
    for (auto& l : mean_loss) l = rng.uniform();
    // Exact expectation over A ~ q and Bernoulli loss outcomes.
    std::vector<double> expect(k, 0.0);
    for (std::size_t a = 0; a < k; ++a) {
      for (int loss = 0; loss <= 1; ++loss) {
        const double prob = q[a] * (loss == 1 ? mean_loss[a] : 1.0 - mean_loss[a]);
        const auto est = loss_estimate(SimplexDistribution(q), a, loss, 0.0,
                                       EstimatorVariant::centered_importance_weighted);
        for (std::size_t i = 0; i < k; ++i) expect[i] += prob * est[i];
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      const double err = std::abs(expect[i] - (mean_loss[i] - 0.5));
      r.worst = std::max(r.worst, err);
      if (err > 1e-12 && r.passed) {
        r.passed = false;
        r.detail = "case " + std::to_string(s) + ": bias " + std::to_string(err);
      }
    }
    ++r.cases;
  }
  return r;
}

}  // namespace

BaiCalibration calibrate_bai_constant(std::size_t n_max) {
  BaiCalibration best{std::numeric_limits<double>::infinity(), 0, 0.0};
  for (std::size_t n = 3; n <= n_max; ++n) {
    const double floor_keep = 2.0 / static_cast<double>(n);
    for (int j = 0; j < 50; ++j) {
      const double keep = floor_keep + (1.0 - floor_keep) * j / 50.0;
      const double delta = 1.0 - keep;
      if (keep * static_cast<double>(n) < 2.0) continue;
      const double ratio = bai_ratio(delta, n);
      if (ratio < best.constant) best = {ratio, n, delta};
    }
  }
  return best;
}

std::vector<CheckResult> kl_suite(std::uint64_t seed, std::size_t draws) {
  RngStream rng(seed, 0);
  std::vector<CheckResult> out;
  out.push_back(nonnegativity(rng, draws));
  out.push_back(convexity_first(rng, draws));
  out.push_back(convexity_second(rng, draws));
  out.push_back(monotonicity(rng, draws));
  out.push_back(log_inequalities(rng, draws));
  out.push_back(log_sum(rng, draws));
  out.push_back(kl_sum(rng, draws));
  out.push_back(bar_kl(rng, draws));
  out.push_back(twelve_eps_squared(rng, draws));
  out.push_back(bai_calibrated(rng, draws));
  return out;
}

std::vector<CheckResult> osmd_suite(std::uint64_t seed, std::size_t triples) {
  RngStream rng(seed, 1);
  std::vector<CheckResult> out;
  out.push_back(mirror_vs_grid(rng, triples));
  out.push_back(simplex_invariants(rng, 2000));
  out.push_back(translation_invariance(rng, 200));
  out.push_back(initial_distribution());
  out.push_back(estimator_dual(rng, 500));
  out.push_back(centered_unbiased(rng, 200));
  return out;
}

bool all_passed(std::span<const CheckResult> results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

void print_checks(std::ostream& out, std::span<const CheckResult> results) {
  for (const auto& r : results) {
    out << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  [cases=" << r.cases << ", worst="
        << std::setprecision(4) << r.worst << "]";
    if (!r.detail.empty()) out << "  " << r.detail;
    out << '\n';
  }
}

}  // namespace bar::verify
