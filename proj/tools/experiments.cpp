#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "gnnio/cache_sim.hpp"
#include "gnnio/error.hpp"
#include "gnnio/ordering.hpp"
#include "gnnio/partitioner.hpp"
#include "gnnio/random.hpp"
#include "gnnio/sampler.hpp"
#include "gnnio/text_format.hpp"

namespace gnnio::experiments {

Graph planted_graph(const PlantedGraphParams& params, std::uint64_t seed) {
  PowerLawOptions options;
  options.num_communities = params.communities;
  options.intra_fraction = params.intra_fraction;
  options.locality_span = params.locality_span;
  return generate_power_law(params.n, params.avg_degree, seed, params.train_fraction, params.num_labels, options);
}

CacheTrend cache_trend(const PlantedGraphParams& params, std::uint64_t seed, double capacity_fraction) {
  const Graph g = planted_graph(params, seed);
  SamplingConfig sampling;
  sampling.seed = mix_seed(seed, 0xca);

  const auto proximity = sample_trace(g, proximity_schedule(g, 1, sampling.batch_size, seed), sampling);
  const auto shuffled = sample_trace(g, random_shuffle_schedule(g, sampling.batch_size, seed), sampling);

  CacheConfig cfg;
  cfg.device_capacity = static_cast<std::uint64_t>(capacity_fraction * g.num_nodes());
  cfg.feature_bytes_per_node = g.feature_bytes_per_node();
  SimulateOptions options;
  options.graph = &g;
  auto hit = [&](CachePolicy policy, const AccessTrace& trace) {
    cfg.policy = policy;
    return simulate(trace, cfg, options).hit_ratio();
  };

  CacheTrend t;
  t.seed = seed;
  t.fifo_proximity = hit(CachePolicy::kFifo, proximity);
  t.fifo_random = hit(CachePolicy::kFifo, shuffled);
  t.static_proximity = hit(CachePolicy::kStaticDegree, proximity);
  t.lru_proximity = hit(CachePolicy::kLru, proximity);
  t.lfu_proximity = hit(CachePolicy::kLfu, proximity);
  return t;
}

PartitionTrend partition_trend(const PlantedGraphParams& params, std::uint64_t seed, std::uint32_t k) {
  const Graph g = planted_graph(params, seed);
  MultilevelParams mp;
  mp.k = k;
  mp.seed = seed;
  const auto multilevel = multilevel_partition(g, mp);
  const auto random = random_partition(g, k, seed);
  const auto one_hop = one_hop_greedy_partition(g, k, seed);

  SamplingConfig sampling;
  sampling.seed = mix_seed(seed, 0x5a);
  const auto schedule = random_shuffle_schedule(g, sampling.batch_size, seed);

  PartitionTrend t;
  t.seed = seed;
  t.remote_multilevel = simulate_epoch(g, multilevel, schedule, sampling).comm.remote_accesses;
  t.remote_random = simulate_epoch(g, random, schedule, sampling).comm.remote_accesses;
  t.remote_one_hop = simulate_epoch(g, one_hop, schedule, sampling).comm.remote_accesses;
  const auto qm = partition_quality(g, multilevel, 1000, seed);
  const auto qo = partition_quality(g, one_hop, 1000, seed);
  t.cut_multilevel = qm.edge_cut_fraction;
  t.cut_random = partition_quality(g, random, 1000, seed).edge_cut_fraction;
  t.cut_one_hop = qo.edge_cut_fraction;
  t.train_balance_multilevel = qm.train_balance;
  t.train_balance_one_hop = qo.train_balance;
  return t;
}

Graph skewed_training_graph(const PlantedGraphParams& params, std::uint64_t seed) {
  Graph g = planted_graph(params, seed);
  const NodeId quarter = g.num_nodes() / 4;
  const auto in_quarter = sample_train_mask(quarter, std::min(1.0, 4.0 * params.train_fraction), seed);
  std::vector<std::uint8_t> mask(g.num_nodes(), 0);
  std::copy(in_quarter.begin(), in_quarter.end(), mask.begin());
  g.set_train_mask(std::move(mask));
  return g;
}

SkewedBalance skewed_train_balance(const PlantedGraphParams& params, std::uint64_t seed, std::uint32_t k) {
  const Graph g = skewed_training_graph(params, seed);
  MultilevelParams mp;
  mp.k = k;
  mp.seed = seed;
  SkewedBalance b;
  b.multilevel = partition_quality(g, multilevel_partition(g, mp), 1, seed).train_balance;
  b.one_hop = partition_quality(g, one_hop_greedy_partition(g, k, seed), 1, seed).train_balance;
  return b;
}

ShufflingTrend shuffling_trend(const PlantedGraphParams& params, std::span<const std::uint64_t> seeds,
                               std::uint32_t max_sequences, std::uint32_t batch_size) {
  if (seeds.empty()) throw Error("shuffling trend needs at least one seed");
  ShufflingTrend t;
  t.mean_epsilon.assign(max_sequences, 0.0);
  for (auto seed : seeds) {
    const Graph g = planted_graph(params, seed);
    auto& row = t.epsilon.emplace_back();
    for (std::uint32_t s = 1; s <= max_sequences; ++s) {
      const auto schedule = proximity_schedule(g, s, batch_size, mix_seed(seed, s));
      row.push_back(shuffling_error(schedule, g.labels()).epsilon);
      t.mean_epsilon[s - 1] += row.back() / static_cast<double>(seeds.size());
    }
  }
  std::vector<double> s_values(max_sequences);
  std::iota(s_values.begin(), s_values.end(), 1.0);
  t.spearman = spearman(s_values, t.mean_epsilon);
  return t;
}

namespace {

std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t m = i; m <= j; ++m) r[order[m]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("spearman needs two equal-length series of length >= 2");
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

void write_cache_trend_csv(std::ostream& out, std::span<const CacheTrend> rows) {
  CsvWriter csv(out, {"seed", "fifo_proximity", "fifo_random", "static_proximity", "lru_proximity", "lfu_proximity"});
  for (const auto& r : rows) {
    csv.cell(r.seed).cell(r.fifo_proximity).cell(r.fifo_random).cell(r.static_proximity).cell(r.lru_proximity)
        .cell(r.lfu_proximity).end_row();
  }
}

void write_partition_trend_csv(std::ostream& out, std::span<const PartitionTrend> rows) {
  CsvWriter csv(out, {"seed", "remote_multilevel", "remote_random", "remote_one_hop", "remote_ratio", "cut_multilevel",
                      "cut_random", "cut_one_hop", "train_balance_multilevel", "train_balance_one_hop"});
  for (const auto& r : rows) {
    csv.cell(r.seed)
        .cell(r.remote_multilevel)
        .cell(r.remote_random)
        .cell(r.remote_one_hop)
        .cell(static_cast<double>(r.remote_multilevel) / static_cast<double>(r.remote_random))
        .cell(r.cut_multilevel)
        .cell(r.cut_random)
        .cell(r.cut_one_hop)
        .cell(r.train_balance_multilevel)
        .cell(r.train_balance_one_hop)
        .end_row();
  }
}

void write_shuffling_trend_csv(std::ostream& out, const ShufflingTrend& trend) {
  CsvWriter csv(out, {"num_sequences", "mean_epsilon"});
  for (std::size_t s = 0; s < trend.mean_epsilon.size(); ++s) {
    csv.cell(static_cast<unsigned long long>(s + 1)).cell(trend.mean_epsilon[s]).end_row();
  }
}

}  // namespace gnnio::experiments
