#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "gnnio/graph.hpp"
#include "gnnio/ordering.hpp"
#include "gnnio/partitioner.hpp"

namespace gnnio {

struct SamplingConfig {
  std::vector<std::uint32_t> fanouts{15, 10, 5};
  std::uint32_t batch_size = 1000;
  std::uint64_t seed = 0;

  /// Throws unless there is at least one hop and every fanout is positive.
  void validate() const;
};

/// hops[0] holds the (deduplicated) seeds, hops[h] the hop-h frontier.
/// `distinct` lists every node of the batch once, in first-appearance order.
struct SampledBatch {
  std::vector<std::vector<NodeId>> hops;
  std::vector<NodeId> distinct;
};

/// Per-batch node lists whose features must be fetched.
struct AccessTrace {
  std::vector<std::vector<NodeId>> batches;

  std::uint64_t total_accesses() const;
};

struct EpochCommReport {
  std::uint64_t local_accesses = 0;
  std::uint64_t remote_accesses = 0;
  std::vector<std::uint64_t> seed_load;     // per partition: seeds it hosts
  std::vector<std::uint64_t> request_load;  // per partition: adjacency lookups it serves
  std::uint64_t bytes_remote_features = 0;  // set from a cache simulation

  std::uint64_t total_lookups() const { return local_accesses + remote_accesses; }
  double remote_fraction() const;
};

struct EpochResult {
  AccessTrace trace;
  EpochCommReport comm;
};

/// Multi-hop uniform neighbor sampling. The hop-h frontier is the union over
/// hop h-1 nodes of min(fanout_h, degree) neighbors drawn without replacement.
/// Output is a pure function of the arguments.
SampledBatch sample_batch(const Graph& g, std::span<const NodeId> seeds, const SamplingConfig& cfg,
                          std::uint64_t batch_seed);

/// Seed of batch `index` within an epoch.
std::uint64_t batch_seed(const SamplingConfig& cfg, std::uint64_t index);

/// Samples every batch of `schedule` and accounts each adjacency lookup as
/// local when the looked-up node lives in the partition of the seed the
/// lookup descends from (first discoverer wins for shared nodes).
EpochResult simulate_epoch(const Graph& g, const Partitioning& p, const BatchSchedule& schedule,
                           const SamplingConfig& cfg);

/// Like simulate_epoch without partition accounting.
AccessTrace sample_trace(const Graph& g, const BatchSchedule& schedule, const SamplingConfig& cfg);

/// One batch per line, space-separated distinct node IDs.
void save_trace(const AccessTrace& trace, const std::filesystem::path& path);
AccessTrace load_trace(const std::filesystem::path& path);

/// Single summary row with header.
void write_comm_csv(std::ostream& out, const EpochCommReport& report);
/// One row per partition: seed_load, request_load.
void write_partition_load_csv(std::ostream& out, const EpochCommReport& report);

}  // namespace gnnio
