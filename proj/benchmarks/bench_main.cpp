#include "stelnet/stelnet.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace stelnet;

namespace {

Dataset scale_free_sample(int p, int n, DistributionKind kind, std::uint64_t seed) {
  TopologySpec spec;
  spec.p = p;
  spec.seed = seed;
  DistributionSpec dist;
  dist.kind = kind;
  dist.nu = 3.0;
  dist.seed = seed + 1;
  return sample(generate_precision(spec), n, dist);
}

void BM_ElasticNetSolve(benchmark::State& state) {
  const auto n = state.range(0), k = state.range(1);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  Matrix x(n, k);
  for (auto& v : x.reshaped()) v = z(rng);
  Vector y = x.leftCols(3).rowwise().sum();
  for (auto& v : y) v += z(rng);
  const PenaltyConfig penalty{0.5, 0.05};
  for (auto _ : state) benchmark::DoNotOptimize(solve(x, y, penalty));
}
BENCHMARK(BM_ElasticNetSolve)->Args({500, 20})->Args({2000, 50})->Args({500, 200});

void BM_Neighborhoods(benchmark::State& state) {
  const Dataset d = scale_free_sample(static_cast<int>(state.range(0)), 500, DistributionKind::Normal, 2);
  for (auto _ : state) benchmark::DoNotOptimize(select_neighborhoods(d, {0.5, 0.1}));
}
BENCHMARK(BM_Neighborhoods)->Arg(20)->Arg(50)->Arg(100);

void BM_ConstrainedMle(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  TopologySpec spec;
  spec.p = p;
  spec.seed = 3;
  const PrecisionMatrix theta = generate_precision(spec);
  const Dataset d = sample(theta, 1000, DistributionSpec{});
  const Matrix x = d.values().rowwise() - d.values().colwise().mean();
  const Matrix s = x.transpose() * x / static_cast<double>(x.rows());
  const EdgeSet edges = EdgeSet::from_support(theta.matrix());
  for (auto _ : state) benchmark::DoNotOptimize(fit_constrained_mle(s, edges));
}
BENCHMARK(BM_ConstrainedMle)->Arg(20)->Arg(50)->Arg(100);

void BM_EstimateT(benchmark::State& state) {
  const Dataset d = scale_free_sample(static_cast<int>(state.range(0)), 500, DistributionKind::StudentT, 4);
  EMConfig cfg;
  cfg.mode = EstimatorMode::StudentT;
  cfg.nu = 3.0;
  cfg.penalty.lambda = 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(estimate(d, cfg));
}
BENCHMARK(BM_EstimateT)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_SelectGaussian(benchmark::State& state) {
  const Dataset d = scale_free_sample(20, 500, DistributionKind::Normal, 5);
  EMConfig cfg;
  cfg.mode = EstimatorMode::Gaussian;
  const LambdaGrid grid = build_grid(std::exp(-6.0), 2.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(select(d, grid, cfg));
}
BENCHMARK(BM_SelectGaussian)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
