#include <benchmark/benchmark.h>

#include <vector>

#include "epitaxy/integrate.hpp"
#include "epitaxy/oracle.hpp"
#include "epitaxy/shoot.hpp"

using namespace epitaxy;

static void BM_ShotEndpoint(benchmark::State& state) {
  const auto spec = ProblemSpec::make(BoundaryKind::Dirichlet, 100.0);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_endpoint(spec, 13.6));
}
BENCHMARK(BM_ShotEndpoint)->Unit(benchmark::kMicrosecond);

static void BM_ShotTrajectory(benchmark::State& state) {
  const auto spec = ProblemSpec::make(BoundaryKind::Dirichlet, 100.0);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_backward(spec, 13.6));
}
BENCHMARK(BM_ShotTrajectory)->Unit(benchmark::kMicrosecond);

static void BM_FindRoots(benchmark::State& state) {
  const auto spec = ProblemSpec::make(BoundaryKind::Navier, 5.0);
  for (auto _ : state) benchmark::DoNotOptimize(find_roots(spec));
}
BENCHMARK(BM_FindRoots)->Unit(benchmark::kMillisecond);

static void BM_OracleGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto df = DiscreteFunctional::make(FunctionalKind::J, BoundaryKind::Dirichlet, n, 100.0);
  std::vector<double> u;
  for (double r : df.nodes()) u.push_back((1 - r * r) * (1 - r * r));
  for (auto _ : state) benchmark::DoNotOptimize(discrete_gradient(df, u));
}
BENCHMARK(BM_OracleGradient)->Arg(128)->Arg(512)->Arg(2048);

static void BM_OracleMinimize(benchmark::State& state) {
  const auto df = DiscreteFunctional::make(FunctionalKind::J, BoundaryKind::Dirichlet, 512, 100.0);
  const std::vector<double> zero(512, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(minimize(df, zero));
}
BENCHMARK(BM_OracleMinimize)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
