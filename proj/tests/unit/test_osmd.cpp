#include <cmath>
#include <numeric>
#include <vector>

#include "bar/env.hpp"
#include "bar/errors.hpp"
#include "bar/osmd.hpp"
#include "bar/rng.hpp"
#include "doctest.h"
#include "oracle.hpp"
#include "verify.hpp"

using bar::EstimatorVariant;
using bar::SimplexDistribution;

TEST_CASE("simplex validation and uniform") {
  CHECK_THROWS_AS(SimplexDistribution({0.5, 0.4}), bar::InputError);
  CHECK_THROWS_AS(SimplexDistribution({1.5, -0.5}), bar::InputError);
  CHECK_THROWS_AS(SimplexDistribution({}), bar::InputError);
  CHECK_NOTHROW(SimplexDistribution({0.5, 0.5 + 1e-10}));
  const auto u = SimplexDistribution::uniform(4);
  for (double w : u.weights()) CHECK(w == 0.25);
  CHECK(bar::init_distribution(5).weights()[3] == doctest::Approx(0.2));
}

TEST_CASE("simplex sampling follows its weights") {
  const SimplexDistribution q({0.1, 0.0, 0.6, 0.3});
  bar::RngStream rng(1, 0);
  std::vector<int> counts(4, 0);
  for (int i = 0; i < 50000; ++i) ++counts[q.sample(rng)];
  CHECK(counts[1] == 0);
  CHECK(std::abs(counts[0] - 5000) < 350);
  CHECK(std::abs(counts[2] - 30000) < 550);
}

TEST_CASE("learning rate and config validation") {
  bar::OsmdConfig c;
  c.rounds = 10000;
  CHECK(c.eta() == doctest::Approx(0.02828427124746190).epsilon(1e-14));
  c.learning_rate = 0.5;
  CHECK(c.eta() == 0.5);
  c.learning_rate = -1.0;
  CHECK_THROWS_AS(c.validate(), bar::InputError);
  c.learning_rate.reset();
  c.projection_tol = 0.0;
  CHECK_THROWS_AS(c.validate(), bar::InputError);
}

TEST_CASE("estimator variant names") {
  CHECK(bar::to_string(EstimatorVariant::paper_verbatim) == "paper-verbatim");
  CHECK(bar::parse_estimator_variant("centered-importance-weighted") ==
        EstimatorVariant::centered_importance_weighted);
  CHECK_THROWS_AS(bar::parse_estimator_variant("ips"), bar::InputError);
}

TEST_CASE("loss estimate worked example") {
  const SimplexDistribution q({0.25, 0.75});
  const double eta = 0.4;
  const auto pv = bar::loss_estimate(q, 0, 1.0, eta, EstimatorVariant::paper_verbatim);
  const double corr0 = eta * 0.25 / (8 * (0.25 + 0.5));
  const double corr1 = eta * 0.25 / (8 * (0.75 + std::sqrt(0.75)));
  const double ind = 0.5 + eta / 8 * (1 + 1 / 0.75);
  CHECK(pv[0] == doctest::Approx(ind - corr0).epsilon(1e-14));
  CHECK(pv[1] == doctest::Approx(-corr1).epsilon(1e-14));
  const auto ciw = bar::loss_estimate(q, 0, 1.0, eta, EstimatorVariant::centered_importance_weighted);
  CHECK(ciw[0] == doctest::Approx(ind / 0.25 - corr0).epsilon(1e-14));
  CHECK(ciw[1] == pv[1]);

  CHECK_THROWS_AS(bar::loss_estimate(q, 2, 1.0, eta, EstimatorVariant::paper_verbatim), bar::InputError);
  const SimplexDistribution degenerate({1.0, 0.0});
  CHECK_THROWS_AS(bar::loss_estimate(degenerate, 1, 1.0, eta, EstimatorVariant::paper_verbatim),
                  bar::NumericError);
}

TEST_CASE("mirror_step fixed cases against the grid oracle") {
  const std::vector<double> q{0.2, 0.3, 0.5};
  const std::vector<double> est{1.5, -0.4, 0.2};
  const auto p = bar::mirror_step(SimplexDistribution(q), est, 0.3, 1e-13);
  const auto ref = bar::oracle::grid_minimize_mirror(q, est, 0.3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(p[i] == doctest::Approx(ref[i]).epsilon(1e-5));
  // Higher estimated loss means lower weight.
  CHECK(p[0] < q[0]);
  CHECK(p[1] > q[1]);
  // The stationarity form holds with one shared multiplier.
  const double lam0 = (1 / std::sqrt(p[0]) - 1 / std::sqrt(q[0])) / 0.3 - est[0];
  const double lam1 = (1 / std::sqrt(p[1]) - 1 / std::sqrt(q[1])) / 0.3 - est[1];
  CHECK(lam0 == doctest::Approx(lam1).epsilon(1e-8));
}

TEST_CASE("mirror_step handles extreme estimates") {
  const SimplexDistribution q({1e-12, 1.0 - 1e-12});
  const std::vector<double> big{1e12, 0.0};
  const auto p = bar::mirror_step(q, big, 1.0);
  CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p[0] > 0.0);
  const std::vector<double> favour{-1e6, 0.0};
  const auto r = bar::mirror_step(q, favour, 1.0);
  CHECK(r[0] > 0.5);  // one step moves a long way, but the Bregman term limits it
}

TEST_CASE("mirror_step input errors") {
  const auto q = SimplexDistribution::uniform(2);
  const std::vector<double> est{0.0, 0.0}, shorter{0.0}, bad{NAN, 0.0};
  CHECK_THROWS_AS(bar::mirror_step(q, est, 0.0), bar::InputError);
  CHECK_THROWS_AS(bar::mirror_step(q, shorter, 0.1), bar::InputError);
  CHECK_THROWS_AS(bar::mirror_step(q, bad, 0.1), bar::InputError);
  CHECK_THROWS_AS(bar::mirror_step(q, est, 0.1, 0.0), bar::InputError);
}

TEST_CASE("MirrorDescent update equals loss_estimate followed by mirror_step") {
  bar::MirrorDescent md(3, 0.2, EstimatorVariant::centered_importance_weighted, 1e-12);
  auto q = SimplexDistribution::uniform(3);
  for (int step = 0; step < 20; ++step) {
    const std::size_t chosen = static_cast<std::size_t>(step % 3);
    const double loss = step % 2;
    const auto est = bar::loss_estimate(q, chosen, loss, 0.2, EstimatorVariant::centered_importance_weighted);
    q = bar::mirror_step(q, est, 0.2, 1e-12);
    md.update(chosen, loss);
    for (std::size_t i = 0; i < 3; ++i) CHECK(md.distribution()[i] == doctest::Approx(q[i]).epsilon(1e-12));
    CHECK(md.last_iterations() >= 0);
    CHECK(md.last_iterations() <= 200);
  }
}

TEST_CASE("run_osmd bookkeeping and concentration on the best arm") {
  const bar::BernoulliInstance mu({0.5, 0.9, 0.5, 0.5});
  bar::OsmdConfig cfg;
  cfg.rounds = 5000;
  bar::RngStream rng(7, 0);
  const std::vector<bar::ArmIndex> arms{0, 1, 2, 3};
  const auto stats = bar::run_osmd(arms, mu, cfg, rng);
  CHECK(stats.rounds == 5000);
  CHECK(stats.consistent());
  CHECK(stats.pulls[1] > 2500);

  // A subset: unused arms get no pulls.
  bar::RngStream rng2(7, 1);
  const std::vector<bar::ArmIndex> subset{2, 3};
  const auto sub = bar::run_osmd(subset, mu, cfg, rng2);
  CHECK(sub.pulls[0] == 0);
  CHECK(sub.pulls[1] == 0);
  CHECK(sub.pulls[2] + sub.pulls[3] == 5000);

  cfg.rounds = 0;
  bar::RngStream rng3(7, 2);
  CHECK(bar::run_osmd(arms, mu, cfg, rng3).rounds == 0);
  cfg.rounds = 10;
  const std::vector<bar::ArmIndex> single{3};
  CHECK(bar::run_osmd(single, mu, cfg, rng3).pulls[3] == 10);
  const std::vector<bar::ArmIndex> dup{1, 1};
  CHECK_THROWS_AS(bar::run_osmd(dup, mu, cfg, rng3), bar::InputError);
}

TEST_CASE("osmd oracle suite passes with a different seed") {
  const auto checks = bar::verify::osmd_suite(77, 60);
  for (const auto& c : checks) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.passed);
  }
}

TEST_CASE("init_distribution edge cases") {
  CHECK_THROWS_AS(bar::init_distribution(0), bar::InputError);
  CHECK(bar::init_distribution(1)[0] == 1.0);
  const auto q = bar::init_distribution(3);
  const auto ref = bar::oracle::grid_minimize_potential3(1e-3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(q[i] - ref[i]) <= 1e-3);
}

TEST_CASE("documented loss-estimate cases") {
  const auto u = SimplexDistribution::uniform(2);
  const auto zero = bar::loss_estimate(u, 0, 0.5, 0.0, EstimatorVariant::paper_verbatim);
  CHECK(zero[0] == 0.0);
  CHECK(zero[1] == 0.0);
  const std::vector<double> q{0.5, 0.5};
  for (auto v : {EstimatorVariant::paper_verbatim, EstimatorVariant::centered_importance_weighted}) {
    const auto a = bar::loss_estimate(u, 0, 1.0, 0.1, v);
    const auto b = bar::oracle::loss_estimate_reference(q, 0, 1.0, 0.1, v);
    CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-15));
    CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-15));
  }
  // Direct substitution: 1/2 + 0.1/8 (1 + 1/(0.5 + sqrt 0.5)) - 0.1 * 0.5 / (8 (0.5 + sqrt 0.5)).
  const double root = std::sqrt(0.5);
  const auto pv = bar::loss_estimate(u, 0, 1.0, 0.1, EstimatorVariant::paper_verbatim);
  CHECK(pv[0] == doctest::Approx(0.5 + 0.0125 * (1 + 1 / (0.5 + root)) - 0.05 / (8 * (0.5 + root))));
  CHECK(pv[1] == doctest::Approx(-0.05 / (8 * (0.5 + root))));
}

TEST_CASE("documented mirror-step cases") {
  const SimplexDistribution q({0.1, 0.2, 0.3, 0.4});
  const auto same = bar::mirror_step(q, std::vector<double>(4, 0.0), 0.3);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(same[i] - q[i]) < 1e-9);  // default tolerance 1e-10

  const std::vector<double> half{0.5, 0.5}, est{1.0, 0.0};
  const auto p = bar::mirror_step(SimplexDistribution(half), est, 0.1, 1e-13);
  CHECK(p[0] < 0.5);
  CHECK(p[1] > 0.5);
  const auto ref = bar::oracle::grid_minimize_mirror(half, est, 0.1, 1e-6);
  CHECK(std::abs(p[0] - ref[0]) < 1e-5);
  CHECK(std::abs(p[1] - ref[1]) < 1e-5);
}

TEST_CASE("run_osmd is deterministic for a fixed stream") {
  const auto mu = bar::hard_instance(6, 0.1);
  bar::OsmdConfig cfg;
  cfg.rounds = 2000;
  bar::RngStream a(5, 3), b(5, 3);
  const auto arms = mu.arms();
  CHECK(bar::run_osmd(arms, mu, cfg, a) == bar::run_osmd(arms, mu, cfg, b));
  CHECK(a.position() == b.position());
}
