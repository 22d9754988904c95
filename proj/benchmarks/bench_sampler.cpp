#include <benchmark/benchmark.h>

#include "gnnio/ordering.hpp"
#include "gnnio/sampler.hpp"

namespace {

using namespace gnnio;

const Graph& graph() {
  static const Graph g = generate_power_law(50000, 15, 4, 0.1, 8);
  return g;
}

void BM_SampleBatch(benchmark::State& state) {
  SamplingConfig cfg;
  cfg.batch_size = static_cast<std::uint32_t>(state.range(0));
  const auto schedule = random_shuffle_schedule(graph(), cfg.batch_size, 4);
  std::uint64_t i = 0;
  std::uint64_t nodes = 0;
  for (auto _ : state) {
    const auto& seeds = schedule.batches[i % schedule.batches.size()];
    auto batch = sample_batch(graph(), seeds, cfg, batch_seed(cfg, i++));
    nodes += batch.distinct.size();
    benchmark::DoNotOptimize(batch);
  }
  state.counters["nodes/batch"] = benchmark::Counter(static_cast<double>(nodes), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_SampleBatch)->Arg(100)->Arg(1000);

void BM_ProximitySchedule(benchmark::State& state) {
  const auto s = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(proximity_schedule(graph(), s, 1000, 4));
}
BENCHMARK(BM_ProximitySchedule)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_SimulateEpoch(benchmark::State& state) {
  SamplingConfig cfg;
  const auto p = random_partition(graph(), 4, 4);
  const auto schedule = random_shuffle_schedule(graph(), cfg.batch_size, 4);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_epoch(graph(), p, schedule, cfg).comm.remote_accesses);
}
BENCHMARK(BM_SimulateEpoch)->Unit(benchmark::kMillisecond);

}  // namespace
