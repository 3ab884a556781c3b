#include <benchmark/benchmark.h>

#include "qqd/bounds.hpp"
#include "qqd/discrepancy.hpp"
#include "qqd/search.hpp"

namespace {

qqd::DesignSpec spec_for(int n) { return qqd::DesignSpec(n, 2, 3, {2, 4, n, n, 2}); }

void BM_ClosedForm(benchmark::State& state) {
  const auto design = qqd::random_utype(spec_for(static_cast<int>(state.range(0))), 1);
  for (auto _ : state) benchmark::DoNotOptimize(qqd::qqd_squared(design));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ClosedForm)->RangeMultiplier(2)->Range(16, 512)->Complexity(benchmark::oNSquared);

void BM_QuadraticForm(benchmark::State& state) {
  const auto design = qqd::random_utype(spec_for(static_cast<int>(state.range(0))), 1);
  for (auto _ : state) benchmark::DoNotOptimize(qqd::qqd_squared_quadratic(design));
}
BENCHMARK(BM_QuadraticForm)->Arg(8)->Arg(16)->Arg(24);

void BM_SwapDelta(benchmark::State& state) {
  auto design = qqd::random_utype(spec_for(static_cast<int>(state.range(0))), 1);
  qqd::PairCache cache(design);
  const int n = design.runs();
  int i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cache.evaluate_swap(design, 2, i, (i + n / 2) % n));
    i = (i + 1) % n;
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SwapDelta)->RangeMultiplier(2)->Range(16, 512)->Complexity(benchmark::oN);

void BM_Lb1(benchmark::State& state) {
  const qqd::DesignSpec spec(8, 7, 7, {2, 2, 2, 2, 2, 2, 2, 4, 4, 4, 4, 4, 4, 4});
  for (auto _ : state) benchmark::DoNotOptimize(qqd::lb1(spec));
}
BENCHMARK(BM_Lb1);

void BM_Search(benchmark::State& state) {
  qqd::SearchConfig config;
  config.budget = static_cast<std::uint64_t>(state.range(0));
  config.stop_at_bound = false;
  for (auto _ : state) benchmark::DoNotOptimize(qqd::search_uniform(qqd::DesignSpec(16, 2, 2, {2, 2, 4, 4}), config));
}
BENCHMARK(BM_Search)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
