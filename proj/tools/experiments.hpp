#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gnnio/graph.hpp"

namespace gnnio::experiments {

/// Shape of the planted-community graph used by the trend experiments.
struct PlantedGraphParams {
  NodeId n = 100000;
  std::uint32_t avg_degree = 15;
  double train_fraction = 0.1;
  std::uint32_t num_labels = 16;
  std::uint32_t communities = 64;
  double intra_fraction = 0.9;
  std::uint32_t locality_span = 1;
};

Graph planted_graph(const PlantedGraphParams& params, std::uint64_t seed);

struct CacheTrend {
  std::uint64_t seed = 0;
  double fifo_proximity = 0;
  double fifo_random = 0;
  double static_proximity = 0;
  double lru_proximity = 0;
  double lfu_proximity = 0;
};

/// One epoch of fanout {15,10,5} sampling at b=1000 through a single-device
/// cache holding `capacity_fraction` of the nodes. Proximity order uses one
/// BFS sequence.
CacheTrend cache_trend(const PlantedGraphParams& params, std::uint64_t seed, double capacity_fraction = 0.10);

struct PartitionTrend {
  std::uint64_t seed = 0;
  std::uint64_t remote_multilevel = 0;
  std::uint64_t remote_random = 0;
  std::uint64_t remote_one_hop = 0;
  double cut_multilevel = 0;
  double cut_random = 0;
  double cut_one_hop = 0;
  double train_balance_multilevel = 0;
  double train_balance_one_hop = 0;
};

/// k-way partitions of the planted graph, compared on one randomly shuffled
/// sampling epoch.
PartitionTrend partition_trend(const PlantedGraphParams& params, std::uint64_t seed, std::uint32_t k = 4);

struct SkewedBalance {
  double multilevel = 0;
  double one_hop = 0;
};

/// Planted graph whose training nodes all sit in one contiguous quarter of
/// the community ring.
Graph skewed_training_graph(const PlantedGraphParams& params, std::uint64_t seed);
SkewedBalance skewed_train_balance(const PlantedGraphParams& params, std::uint64_t seed, std::uint32_t k = 4);

struct ShufflingTrend {
  std::vector<double> mean_epsilon;  // index S-1
  std::vector<std::vector<double>> epsilon;  // [seed][S-1]
  double spearman = 0;
};

ShufflingTrend shuffling_trend(const PlantedGraphParams& params, std::span<const std::uint64_t> seeds,
                               std::uint32_t max_sequences, std::uint32_t batch_size = 1000);

/// Rank correlation; tied values get their average rank.
double spearman(std::span<const double> x, std::span<const double> y);

void write_cache_trend_csv(std::ostream& out, std::span<const CacheTrend> rows);
void write_partition_trend_csv(std::ostream& out, std::span<const PartitionTrend> rows);
void write_shuffling_trend_csv(std::ostream& out, const ShufflingTrend& trend);

}  // namespace gnnio::experiments
