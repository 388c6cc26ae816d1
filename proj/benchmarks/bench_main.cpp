#include <benchmark/benchmark.h>

#include "sinai/birth_death.hpp"
#include "sinai/environment.hpp"
#include "sinai/estimator.hpp"
#include "sinai/landscape.hpp"
#include "sinai/seeding.hpp"
#include "sinai/walk.hpp"

using namespace sinai;

namespace {

Environment bench_env(Site half) { return sample_environment(EnvironmentSpec{TwoPoint{0.3}, 11}, {-half, half}); }

void BM_RunWalk(benchmark::State& state) {
  const auto env = bench_env(1024);
  const auto n = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_walk(env, n, ++seed).final_position);
  state.SetItemsProcessed(static_cast<std::int64_t>(n) * state.iterations());
}
BENCHMARK(BM_RunWalk)->Arg(100'000)->Arg(500'000)->Unit(benchmark::kMillisecond);

void BM_EstimateTable(benchmark::State& state) {
  const auto run = run_walk(bench_env(1024), 500'000, 3);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_table(run, 0.25, 10.0, 2259.6).l_gamma.size());
}
BENCHMARK(BM_EstimateTable)->Unit(benchmark::kMillisecond);

void BM_FindBasicValley(benchmark::State& state) {
  const auto s = potential(bench_env(static_cast<Site>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(find_basic_valley(s, 500'000, 0.25).valley.has_value());
}
BENCHMARK(BM_FindBasicValley)->Arg(2048)->Arg(8192)->Unit(benchmark::kMicrosecond);

void BM_GreenSolve(benchmark::State& state) {
  const Site w = static_cast<Site>(state.range(0));
  const auto env = bench_env(w + 2);
  for (auto _ : state) benchmark::DoNotOptimize(sa_weight(env, 0, SiteRange{-w, w}));
}
BENCHMARK(BM_GreenSolve)->Arg(64)->Arg(4096);

void BM_ExcursionMonteCarlo(benchmark::State& state) {
  const auto env = Environment::from_alpha(0, {0.3, 0.7, 0.3});
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(mc_excursion_local_time(env, 0, 2, 100'000, ++seed).mean);
  state.SetItemsProcessed(100'000 * state.iterations());
}
BENCHMARK(BM_ExcursionMonteCarlo)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
