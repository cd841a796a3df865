#include <benchmark/benchmark.h>

#include <vector>

#include "bar/env.hpp"
#include "bar/explore.hpp"
#include "bar/kl.hpp"
#include "bar/osmd.hpp"
#include "bar/rng.hpp"

namespace {

void BM_MirrorStep(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  bar::RngStream rng(1, 0);
  std::vector<double> w(k), est(k);
  double total = 0.0;
  for (auto& x : w) total += (x = 0.01 + rng.uniform());
  for (auto& x : w) x /= total;
  for (auto& e : est) e = rng.uniform() - 0.5;
  est[0] = 40.0;  // one large importance-weighted entry, as after a real update
  const bar::SimplexDistribution q(w);
  for (auto _ : state) benchmark::DoNotOptimize(bar::mirror_step(q, est, 0.05));
}
BENCHMARK(BM_MirrorStep)->Arg(2)->Arg(10)->Arg(100)->Arg(1000);

void BM_RunOsmd(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto mu = bar::hard_instance(n, 0.1);
  const auto arms = mu.arms();
  bar::OsmdConfig cfg;
  cfg.rounds = 10000;
  std::uint64_t trial = 0;
  for (auto _ : state) {
    bar::RngStream rng(2, trial++);
    benchmark::DoNotOptimize(bar::run_osmd(arms, mu, cfg, rng));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.rounds));
}
BENCHMARK(BM_RunOsmd)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_MedianElimination(benchmark::State& state) {
  const auto mu = bar::hard_instance(10, 0.1);
  const auto arms = mu.arms();
  std::uint64_t trial = 0;
  for (auto _ : state) {
    bar::RngStream rng(3, trial++);
    benchmark::DoNotOptimize(bar::median_elimination(arms, 0.2, 0.1, mu, rng));
  }
}
BENCHMARK(BM_MedianElimination)->Unit(benchmark::kMillisecond);

void BM_BernoulliKl(benchmark::State& state) {
  bar::RngStream rng(4, 0);
  std::vector<double> xs(1024);
  for (auto& x : xs) x = rng.uniform();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bar::kl::bernoulli_kl(xs[i & 1023], xs[(i + 1) & 1023]));
    ++i;
  }
}
BENCHMARK(BM_BernoulliKl);

}  // namespace

BENCHMARK_MAIN();
