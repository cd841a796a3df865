#include "bar/audit.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "bar/errors.hpp"
#include "bar/kl.hpp"
#include "bar/parallel.hpp"
#include "bar/stats.hpp"

namespace bar {

std::vector<std::uint64_t> Transcript::pull_counts(std::size_t n) const {
  std::vector<std::uint64_t> counts(n, 0);
  for (ArmIndex a : arms) ++counts[a];
  return counts;
}

double Transcript::empirical_mean(ArmIndex arm) const {
  std::uint64_t pulls = 0;
  std::uint64_t total = 0;
  for (std::size_t t = 0; t < arms.size(); ++t) {
    if (arms[t] != arm) continue;
    ++pulls;
    total += static_cast<std::uint64_t>(rewards[t]);
  }
  return pulls == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(pulls);
}

SamplingPolicy round_robin(std::uint64_t pulls_per_arm) {
  return [pulls_per_arm](const BernoulliInstance& instance, RngStream& rng, Transcript& log) {
    for (std::uint64_t s = 0; s < pulls_per_arm; ++s) {
      for (ArmIndex a = 0; a < instance.size(); ++a) log.push(a, sample(instance, a, rng));
    }
  };
}

EventPredicate mean_exceeds(ArmIndex arm, ArmIndex other) {
  return [arm, other](const Transcript& log) {
    return log.empirical_mean(arm) > log.empirical_mean(other);
  };
}

EventPredicate always() {
  return [](const Transcript&) { return true; };
}

bool AuditResult::passed() const noexcept { return lhs + 3.0 * lhs_se >= rhs - 3.0 * rhs_se; }

AuditResult likelihood_ratio_audit(const BernoulliInstance& mu, const BernoulliInstance& mu_alt,
                                   const SamplingPolicy& policy, const EventPredicate& event,
                                   std::uint64_t trials, std::uint64_t seed, unsigned parallelism) {
  if (mu.size() != mu_alt.size()) throw InputError("likelihood_ratio_audit: instance sizes differ");
  if (trials == 0) throw InputError("likelihood_ratio_audit: trials must be positive");
  const std::size_t n = mu.size();

  std::vector<double> per_arm_kl(n);
  for (std::size_t i = 0; i < n; ++i) per_arm_kl[i] = kl::bernoulli_kl(mu.mean(i), mu_alt.mean(i));

  std::vector<std::vector<std::uint64_t>> counts(trials);
  std::vector<char> hit(trials), hit_alt(trials);
  const std::uint64_t alt_seed = splitmix64_mix(seed);
  parallel_for(trials, parallelism, [&](std::uint64_t t) {
    RngStream rng(seed, t);
    Transcript log;
    policy(mu, rng, log);
    counts[t] = log.pull_counts(n);
    hit[t] = event(log) ? 1 : 0;

    RngStream rng_alt(alt_seed, t);
    Transcript log_alt;
    policy(mu_alt, rng_alt, log_alt);
    hit_alt[t] = event(log_alt) ? 1 : 0;
  });

  AuditResult out;
  out.mean_pulls.assign(n, 0.0);
  std::vector<double> lhs_samples(trials);
  std::uint64_t events = 0;
  std::uint64_t events_alt = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    double value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (counts[t][i] == 0) continue;  // 0 * d is 0 even when d is infinite
      value += static_cast<double>(counts[t][i]) * per_arm_kl[i];
      out.mean_pulls[i] += static_cast<double>(counts[t][i]);
    }
    lhs_samples[t] = value;
    events += static_cast<std::uint64_t>(hit[t]);
    events_alt += static_cast<std::uint64_t>(hit_alt[t]);
  }
  for (auto& p : out.mean_pulls) p /= static_cast<double>(trials);

  const auto lhs = estimate_mean(lhs_samples);
  out.lhs = lhs.mean;
  out.lhs_se = std::isfinite(lhs.mean) ? lhs.standard_error : 0.0;

  const double count = static_cast<double>(trials);
  const double p = static_cast<double>(events) / count;
  const double q = static_cast<double>(events_alt) / count;
  out.event_prob = p;
  out.event_prob_alt = q;
  out.rhs = kl::bernoulli_kl(p, q);
  out.boundary = p == 0.0 || p == 1.0 || q == 0.0 || q == 1.0;
  if (!out.boundary) {
    // d/dp d(p,q) and d/dq d(p,q), propagated through binomial variances.
    const double dp = std::log(p / q) - std::log((1.0 - p) / (1.0 - q));
    const double dq = -p / q + (1.0 - p) / (1.0 - q);
    const double var = dp * dp * p * (1.0 - p) / count + dq * dq * q * (1.0 - q) / count;
    out.rhs_se = std::sqrt(var);
  }
  return out;
}

AuditResult run_audit(const AuditConfig& config) {
  const auto mu = build_instance(config.mu);
  const auto mu_alt = build_instance(config.mu_alt);
  const EventPredicate event = config.event == AuditConfig::EventKind::always
                                   ? always()
                                   : mean_exceeds(config.event_arm, config.event_other);
  return likelihood_ratio_audit(mu, mu_alt, round_robin(config.pulls_per_arm), event,
                                config.trials, config.seed, config.parallelism);
}

void print_audit(std::ostream& out, const AuditResult& r) {
  out << std::setprecision(8);
  out << "P_mu[E]     " << r.event_prob << "\nP_mu'[E]    " << r.event_prob_alt << '\n';
  out << "lhs         " << r.lhs << "  se " << r.lhs_se << '\n';
  out << "rhs         " << r.rhs << "  se " << r.rhs_se << (r.boundary ? "  (boundary estimate)" : "")
      << '\n';
  out << (r.passed() ? "PASS" : "FAIL") << "  lhs + 3 se >= rhs - 3 se\n";
}

}  // namespace bar
