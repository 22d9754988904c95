#include <benchmark/benchmark.h>

#include "gnnio/partitioner.hpp"

namespace {

using namespace gnnio;

const Graph& graph() {
  static const Graph g = generate_power_law(50000, 15, 5, 0.1, 8, {.num_communities = 32});
  return g;
}

void BM_GenerateBlocks(benchmark::State& state) {
  const auto threshold = static_cast<std::uint64_t>(state.range(0));
  const std::uint64_t sources = (graph().num_nodes() + threshold - 1) / threshold;
  for (auto _ : state) benchmark::DoNotOptimize(generate_blocks(graph(), threshold, sources, 5).num_blocks);
}
BENCHMARK(BM_GenerateBlocks)->Arg(64)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_AssignBlocks(benchmark::State& state) {
  const auto blocks = generate_blocks(graph(), 64, (graph().num_nodes() + 63) / 64, 5);
  const auto merged = merge_small_blocks(coarsen(graph(), blocks), 0.10, 5);
  const auto hops = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(assign_blocks(merged.graph, 4, hops, 5));
  state.counters["blocks"] = static_cast<double>(merged.graph.num_blocks);
}
BENCHMARK(BM_AssignBlocks)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Multilevel(benchmark::State& state) {
  MultilevelParams params;
  params.k = static_cast<PartId>(state.range(0));
  params.seed = 5;
  for (auto _ : state) benchmark::DoNotOptimize(multilevel_partition(graph(), params).k);
}
BENCHMARK(BM_Multilevel)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_OneHopGreedy(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(one_hop_greedy_partition(graph(), 4, 5).k);
}
BENCHMARK(BM_OneHopGreedy)->Unit(benchmark::kMillisecond);

}  // namespace
