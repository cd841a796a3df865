#include "bar/osmd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "bar/errors.hpp"

namespace bar {

namespace {

constexpr int kMaxProjectionIterations = 200;

void fill_estimate(std::span<const double> q, std::size_t chosen, double loss, double eta,
                   EstimatorVariant variant, std::span<double> out) {
  const double q_chosen = q[chosen];
  if (!(q_chosen > 0.0)) {
    throw NumericError("loss_estimate: zero probability at the chosen arm");
  }
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double damp = q[i] + std::sqrt(q[i]);
    out[i] = -eta * q_chosen / (8.0 * damp);
  }
  const double damp = q_chosen + std::sqrt(q_chosen);
  double played = loss - 0.5 + eta / 8.0 * (1.0 + 1.0 / damp);
  if (variant == EstimatorVariant::centered_importance_weighted) played /= q_chosen;
  out[chosen] += played;
}

}  // namespace

SimplexDistribution::SimplexDistribution(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw InputError("SimplexDistribution: empty weight vector");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InputError("SimplexDistribution: weights must be finite and non-negative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InputError("SimplexDistribution: weights sum to " + std::to_string(total));
  }
}

SimplexDistribution SimplexDistribution::uniform(std::size_t k) {
  if (k == 0) throw InputError("SimplexDistribution::uniform: k must be positive");
  return SimplexDistribution(std::vector<double>(k, 1.0 / static_cast<double>(k)), Unchecked{});
}

std::size_t SimplexDistribution::sample(RngStream& rng) const {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < weights_.size(); ++i) {
    acc += weights_[i];
    if (u < acc) return i;
  }
  return weights_.size() - 1;
}

std::string_view to_string(EstimatorVariant v) noexcept {
  switch (v) {
    case EstimatorVariant::paper_verbatim:
      return "paper-verbatim";
    case EstimatorVariant::centered_importance_weighted:
      return "centered-importance-weighted";
  }
  return "unknown";
}

EstimatorVariant parse_estimator_variant(std::string_view name) {
  if (name == "paper-verbatim") return EstimatorVariant::paper_verbatim;
  if (name == "centered-importance-weighted") return EstimatorVariant::centered_importance_weighted;
  throw InputError("unknown estimator variant '" + std::string(name) + "'");
}

double OsmdConfig::eta() const {
  if (learning_rate) return *learning_rate;
  if (rounds == 0) return 0.0;
  return std::sqrt(8.0 / static_cast<double>(rounds));
}

void OsmdConfig::validate() const {
  if (learning_rate && !(*learning_rate > 0.0)) {
    throw InputError("OsmdConfig: learning rate must be positive");
  }
  if (!(projection_tol > 0.0)) throw InputError("OsmdConfig: projection tolerance must be positive");
}

SimplexDistribution init_distribution(std::size_t k) { return SimplexDistribution::uniform(k); }

std::vector<double> loss_estimate(const SimplexDistribution& q, std::size_t chosen, double loss,
                                  double eta, EstimatorVariant variant) {
  if (chosen >= q.size()) throw InputError("loss_estimate: chosen index out of range");
  std::vector<double> out(q.size());
  fill_estimate(q.weights(), chosen, loss, eta, variant, out);
  return out;
}

int MirrorDescent::project(std::span<const double> q, std::span<const double> est, double eta,
                           double tol, std::span<double> out) {
  const std::size_t k = q.size();
  if (k == 1) {
    out[0] = 1.0;
    return 0;
  }
  // out doubles as storage for 1/sqrt(q_i) until the final pass.
  double lo = -std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  const double root_k = std::sqrt(static_cast<double>(k));
  for (std::size_t i = 0; i < k; ++i) {
    const double s = 1.0 / std::sqrt(std::max(q[i], kWeightFloor));
    out[i] = s;
    lo = std::max(lo, (1.0 - s) / eta - est[i]);
    hi = std::max(hi, (root_k - s) / eta - est[i]);
  }

  auto evaluate = [&](double lambda, double& f, double& df) {
    f = -1.0;
    df = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double g = out[i] + eta * (est[i] + lambda);
      const double inv = 1.0 / (g * g);
      f += inv;
      df -= 2.0 * eta * inv / g;
    }
  };

  // f is convex and decreasing on [lo, hi] with f(lo) >= 0 >= f(hi), so Newton
  // from the left endpoint approaches the root monotonically; bisection only
  // guards against rounding pushing an iterate outside the bracket.
  double lambda = lo;
  double f = 0.0;
  double df = 0.0;
  int iter = 0;
  for (; iter < kMaxProjectionIterations; ++iter) {
    evaluate(lambda, f, df);
    if (std::abs(f) <= tol) break;
    if (f > 0.0) {
      lo = lambda;
    } else {
      hi = lambda;
    }
    double next = lambda - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == lambda) break;
    lambda = next;
  }
  if (!(std::abs(f) <= tol)) {
    std::ostringstream msg;
    msg << "mirror_step: projection did not converge after " << iter
        << " iterations (|sum-1|=" << std::abs(f) << ", lambda=" << lambda << ", bracket=[" << lo
        << ", " << hi << "], eta=" << eta << ", k=" << k << ")";
    throw NumericError(msg.str());
  }

  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double g = out[i] + eta * (est[i] + lambda);
    out[i] = 1.0 / (g * g);
    total += out[i];
  }
  for (std::size_t i = 0; i < k; ++i) out[i] = std::max(out[i] / total, kWeightFloor);
  return iter;
}

SimplexDistribution mirror_step(const SimplexDistribution& q, std::span<const double> est,
                                double eta, double tol) {
  if (est.size() != q.size()) throw InputError("mirror_step: estimate length mismatch");
  if (!(eta > 0.0)) throw InputError("mirror_step: eta must be positive");
  if (!(tol > 0.0)) throw InputError("mirror_step: tol must be positive");
  for (double e : est) {
    if (!std::isfinite(e)) throw InputError("mirror_step: non-finite loss estimate");
  }
  std::vector<double> out(q.size());
  MirrorDescent::project(q.weights(), est, eta, tol, out);
  return SimplexDistribution(std::move(out), SimplexDistribution::Unchecked{});
}

MirrorDescent::MirrorDescent(std::size_t k, double eta, EstimatorVariant variant, double tol)
    : q_(SimplexDistribution::uniform(k)),
      est_(k),
      next_(k),
      eta_(eta),
      variant_(variant),
      tol_(tol) {
  if (!(eta > 0.0)) throw InputError("MirrorDescent: eta must be positive");
  if (!(tol > 0.0)) throw InputError("MirrorDescent: tol must be positive");
}

void MirrorDescent::update(std::size_t chosen, double loss) {
  fill_estimate(q_.weights_, chosen, loss, eta_, variant_, est_);
  last_iterations_ = project(q_.weights_, est_, eta_, tol_, next_);
  q_.weights_.swap(next_);
}

PullStats run_osmd(std::span<const ArmIndex> arms, const BernoulliInstance& instance,
                   const OsmdConfig& config, RngStream& rng) {
  if (arms.empty()) throw InputError("run_osmd: empty arm set");
  std::vector<char> seen(instance.size(), 0);
  for (ArmIndex a : arms) {
    if (a >= instance.size()) throw InputError("run_osmd: arm index out of range");
    if (seen[a]++) throw InputError("run_osmd: duplicate arm in arm set");
  }
  config.validate();
  PullStats stats(instance.size());
  if (config.rounds == 0) return stats;

  if (arms.size() == 1) {
    for (std::uint64_t t = 0; t < config.rounds; ++t) {
      stats.record(arms[0], sample(instance, arms[0], rng));
    }
    return stats;
  }

  MirrorDescent learner(arms.size(), config.eta(), config.estimator, config.projection_tol);
  for (std::uint64_t t = 0; t < config.rounds; ++t) {
    const std::size_t local = learner.draw(rng);
    const int reward = sample(instance, arms[local], rng);
    stats.record(arms[local], reward);
    learner.update(local, 1.0 - reward);
  }
  return stats;
}

}  // namespace bar
