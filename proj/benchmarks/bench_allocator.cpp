#include <benchmark/benchmark.h>

#include "gnnio/allocator.hpp"

namespace {

using namespace gnnio;

PipelineProfile profile() {
  PipelineProfile p;
  p.t1 = 12;
  p.t2 = 7;
  p.t3 = 5;
  p.t_net = 0.05;
  p.t_gpu = 0.08;
  p.d_1 = 40;
  p.d_2 = 25;
  return p;
}

void BM_SolveAllocation(benchmark::State& state) {
  const auto c = static_cast<std::uint32_t>(state.range(0));
  const Capacities caps{c, c, c + 4};
  const CacheCostModel model{30, 0.02};
  const PipelineProfile p = profile();
  for (auto _ : state) benchmark::DoNotOptimize(solve_allocation(p, model, caps).bottleneck);
}
BENCHMARK(BM_SolveAllocation)->Arg(12)->Arg(48)->Arg(96)->Unit(benchmark::kMicrosecond);

void BM_FitCacheCost(benchmark::State& state) {
  std::vector<CostSample> samples;
  for (int c = 1; c <= state.range(0); ++c) samples.push_back({double(c), 40.0 / c + 2.0});
  for (auto _ : state) benchmark::DoNotOptimize(fit_cache_cost(samples).a);
}
BENCHMARK(BM_FitCacheCost)->Arg(8)->Arg(96);

}  // namespace
