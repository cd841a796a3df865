#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bar/env.hpp"
#include "bar/rng.hpp"

namespace bar {

/// Smallest weight carried into the next step's 1/sqrt(q).
inline constexpr double kWeightFloor = 1e-300;

/// Probability vector over a (local) arm set.
class SimplexDistribution {
 public:
  /// Throws InputError unless weights are non-negative and sum to 1 within 1e-9.
  explicit SimplexDistribution(std::vector<double> weights);

  static SimplexDistribution uniform(std::size_t k);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const noexcept { return weights_[i]; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// Inverse-CDF draw of a local index.
  std::size_t sample(RngStream& rng) const;

 private:
  friend class MirrorDescent;
  friend SimplexDistribution mirror_step(const SimplexDistribution&, std::span<const double>,
                                         double, double);
  struct Unchecked {};
  SimplexDistribution(std::vector<double> weights, Unchecked) : weights_(std::move(weights)) {}

  std::vector<double> weights_;
};

enum class EstimatorVariant {
  /// Estimator exactly as displayed in the algorithm listing (no 1/q divisor).
  paper_verbatim,
  /// Indicator term divided by q(i): unbiased for the centered loss when eta = 0.
  centered_importance_weighted,
};

std::string_view to_string(EstimatorVariant v) noexcept;
/// Accepts "paper-verbatim" and "centered-importance-weighted".
EstimatorVariant parse_estimator_variant(std::string_view name);

struct OsmdConfig {
  std::uint64_t rounds = 0;
  /// When absent the learning rate is sqrt(8 / rounds).
  std::optional<double> learning_rate;
  EstimatorVariant estimator = EstimatorVariant::centered_importance_weighted;
  double projection_tol = 1e-10;

  double eta() const;
  void validate() const;
};

/// Q_1: the minimizer of F(q) = -2 sum sqrt(q_i) over the simplex, i.e. uniform.
SimplexDistribution init_distribution(std::size_t k);

/*
Loss estimate for every local arm after arm `chosen` was played with loss in [0,1].

paper_verbatim:
  est(i) = [A=i] (loss - 1/2 + eta/8 (1 + 1/(q_i + sqrt q_i))) - eta q_A / (8 (q_i + sqrt q_i))
centered_importance_weighted:
  the [A=i] term above divided by q_i; the second term unchanged.

Throws NumericError when q_chosen is zero, InputError for a bad index.
*/
std::vector<double> loss_estimate(const SimplexDistribution& q, std::size_t chosen, double loss,
                                  double eta, EstimatorVariant variant);

/*
argmin_{p in simplex} <p, est> + (1/eta) B_F(p, q) for F(p) = -2 sum sqrt(p_i).

Stationarity gives p_i(lambda) = (1/sqrt(q_i) + eta (est_i + lambda))^-2, and the
multiplier lambda is the unique root of sum_i p_i(lambda) = 1. The sum is convex
and decreasing in lambda, bracketed by
  lo = max_i ((1 - 1/sqrt q_i)/eta - est_i)         (some p_i = 1, so sum >= 1)
  hi = max_i ((sqrt k - 1/sqrt q_i)/eta - est_i)    (all p_i <= 1/k, so sum <= 1)
and solved by Newton steps with bisection fallback. Throws NumericError if
|sum - 1| > tol after 200 iterations.
*/
SimplexDistribution mirror_step(const SimplexDistribution& q, std::span<const double> est,
                                double eta, double tol = 1e-10);

/// Reusable-buffer learner; one instance per trial.
class MirrorDescent {
 public:
  MirrorDescent(std::size_t k, double eta, EstimatorVariant variant, double tol);

  const SimplexDistribution& distribution() const noexcept { return q_; }
  std::size_t draw(RngStream& rng) const { return q_.sample(rng); }
  /// Applies loss_estimate + mirror_step in place for one observed loss.
  void update(std::size_t chosen, double loss);

  /// Number of root-finding iterations spent by the last update.
  int last_iterations() const noexcept { return last_iterations_; }

 private:
  friend SimplexDistribution mirror_step(const SimplexDistribution&, std::span<const double>,
                                         double, double);
  static int project(std::span<const double> q, std::span<const double> est, double eta,
                     double tol, std::span<double> out);

  SimplexDistribution q_;
  std::vector<double> est_;
  std::vector<double> next_;
  double eta_;
  EstimatorVariant variant_;
  double tol_;
  int last_iterations_ = 0;
};

/*
Runs L = config.rounds rounds of mirror descent over `arms` on `instance`, using
loss = 1 - reward. Returned PullStats is indexed by instance arm.
*/
PullStats run_osmd(std::span<const ArmIndex> arms, const BernoulliInstance& instance,
                   const OsmdConfig& config, RngStream& rng);

}  // namespace bar
