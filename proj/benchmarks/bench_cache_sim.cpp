#include <benchmark/benchmark.h>

#include "gnnio/cache_sim.hpp"
#include "gnnio/ordering.hpp"
#include "gnnio/sampler.hpp"

namespace {

using namespace gnnio;

const Graph& graph() {
  static const Graph g = generate_power_law(50000, 15, 3, 0.1, 8);
  return g;
}

const AccessTrace& trace() {
  static const AccessTrace t = [] {
    SamplingConfig cfg;
    return sample_trace(graph(), proximity_schedule(graph(), 1, cfg.batch_size, 3), cfg);
  }();
  return t;
}

void BM_Simulate(benchmark::State& state) {
  CacheConfig cfg;
  cfg.policy = static_cast<CachePolicy>(state.range(0));
  cfg.num_devices = static_cast<std::uint32_t>(state.range(1));
  cfg.device_capacity = graph().num_nodes() / 20 / cfg.num_devices;
  cfg.host_capacity = graph().num_nodes() / 20;
  SimulateOptions options;
  options.graph = &graph();
  const AccessTrace& t = trace();
  for (auto _ : state) benchmark::DoNotOptimize(simulate(t, cfg, options).total.device_hits);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * t.total_accesses()));
  state.SetLabel(std::string(to_string(cfg.policy)));
}

void policies(benchmark::internal::Benchmark* b) {
  for (auto p : {CachePolicy::kStaticDegree, CachePolicy::kFifo, CachePolicy::kLru, CachePolicy::kLfu}) {
    for (int d : {1, 4}) b->Args({static_cast<std::int64_t>(p), d});
  }
}

BENCHMARK(BM_Simulate)->Apply(policies)->Unit(benchmark::kMillisecond);

}  // namespace
