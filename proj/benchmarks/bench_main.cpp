#include <benchmark/benchmark.h>

#include <vector>

#include "fsync/bounds.hpp"
#include "fsync/dist.hpp"
#include "fsync/fisherineq.hpp"
#include "fsync/pattern.hpp"
#include "fsync/rng.hpp"
#include "fsync/stats.hpp"
#include "fsync/sync.hpp"

namespace {

void BM_FisherInformationQuadrature(benchmark::State& state) {
  const auto spec = fisher::DistributionSpec::logistic(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spec.fisher_information());
  }
}
BENCHMARK(BM_FisherInformationQuadrature);

void BM_MixtureSampling(benchmark::State& state) {
  const auto spec = fisher::DistributionSpec::mixture2(0.5, 1.5, 0.25);
  fisher::Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spec.sample(rng));
  }
}
BENCHMARK(BM_MixtureSampling);

void BM_TournamentTrial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  fisher::Rng gen(7);
  const auto pattern = fisher::gen_tournament(n, gen);
  const std::vector<fisher::DistributionSpec> assignment(
      n, fisher::DistributionSpec::gaussian(1.0));
  const auto noise = fisher::DistributionSpec::gaussian(1.0);
  fisher::Rng rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fisher::run_trial(pattern, assignment, noise, 0.0,
                          fisher::Algorithm::Alg, {}, rng,
                          {.validate_pattern = false}));
  }
  state.SetItemsProcessed(state.iterations() * (n - 1));
}
BENCHMARK(BM_TournamentTrial)->Arg(64)->Arg(256)->Arg(1024);

void BM_FiRecursion(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  fisher::Rng gen(11);
  const auto pattern = fisher::gen_random_independent(n, 6, 0.8, gen);
  const std::vector<double> j0(n, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fisher::fi_recursion(pattern, j0, 2.0, false));
  }
}
BENCHMARK(BM_FiRecursion)->Arg(256)->Arg(4096);

void BM_IndependenceValidation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  fisher::Rng gen(13);
  const auto pattern = fisher::gen_random_independent(n, 6, 0.8, gen);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fisher::validate_independence(pattern));
  }
}
BENCHMARK(BM_IndependenceValidation)->Arg(256)->Arg(1024);

void BM_WelfordAccumulate(benchmark::State& state) {
  fisher::Rng rng(5);
  std::vector<double> xs(1 << 16);
  for (auto& x : xs) x = rng.normal01();
  for (auto _ : state) {
    fisher::RunningMoments acc;
    for (double x : xs) acc.add(x);
    benchmark::DoNotOptimize(acc.variance());
  }
  state.SetItemsProcessed(state.iterations() * xs.size());
}
BENCHMARK(BM_WelfordAccumulate);

void BM_Convolve1D(benchmark::State& state) {
  const auto grid = fisher::symmetric_grid(20.0, static_cast<int>(state.range(0)));
  const auto p1 =
      fisher::sample_density(fisher::DistributionSpec::logistic(1.0), grid);
  const auto p2 =
      fisher::sample_density(fisher::DistributionSpec::gaussian(1.0), grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fisher::convolve_1d(p1, p2, grid));
  }
}
BENCHMARK(BM_Convolve1D)->Arg(1025)->Arg(4097);

}  // namespace

BENCHMARK_MAIN();
