#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gnnio/graph.hpp"

namespace gnnio {

using Sequence = std::vector<NodeId>;

/// One epoch of mini-batches. Concatenated, the batches are a permutation of
/// the training set; every batch holds `batch_size` nodes except possibly the last.
struct BatchSchedule {
  std::vector<std::vector<NodeId>> batches;
  std::uint32_t batch_size = 0;
  std::string policy;

  std::size_t num_nodes() const;
};

struct ShufflingErrorReport {
  double epsilon = 0.0;    // mean TV distance over full-size batches
  double max_tv = 0.0;
  double threshold = 0.0;  // sqrt(b * M) / n, filled by select_num_sequences
  std::uint32_t num_sequences = 0;
  std::vector<double> batch_tv;
};

struct SequenceSelection {
  std::uint32_t num_sequences = 1;
  ShufflingErrorReport report;
  bool threshold_met = false;  // false: no S <= S_max met the threshold, S = S_max
  std::vector<double> epsilon_by_s;  // epsilon for S = 1..chosen
};

/// Training nodes in BFS first-visit order. The BFS runs over the whole graph
/// from `root` and emits only members of `shard`; whenever the frontier
/// empties it restarts from a uniformly drawn unvisited shard member.
Sequence bfs_training_order(const Graph& g, std::span<const NodeId> shard, NodeId root, std::uint64_t seed);

/// Splits the training set (ascending IDs) into S contiguous shards and emits
/// one BFS sequence per shard, each rooted at a random member of its shard.
std::vector<Sequence> generate_bfs_sequences(const Graph& g, std::uint32_t num_sequences, std::uint64_t seed);

/// seq[r..] ++ seq[..r]
Sequence rotate_sequence(std::span<const NodeId> seq, std::size_t r);

/// Rotation by an offset drawn uniformly from [0, len).
Sequence random_shift(std::span<const NodeId> seq, std::uint64_t seed);

/// Round-robin over the sequence heads, one node per live sequence per turn,
/// cutting a batch every `batch_size` nodes.
BatchSchedule form_batches(std::span<const Sequence> seqs, std::uint32_t batch_size);

/// Proximity-aware schedule: S BFS sequences, each randomly shifted, then
/// interleaved into batches.
BatchSchedule proximity_schedule(const Graph& g, std::uint32_t num_sequences, std::uint32_t batch_size,
                                 std::uint64_t seed);

/// Uniform permutation of the training set sliced into batches.
BatchSchedule random_shuffle_schedule(const Graph& g, std::uint32_t batch_size, std::uint64_t seed);

/// Per-batch total variation distance between batch and training-set label
/// frequencies. Throws when a scheduled node has no label.
ShufflingErrorReport shuffling_error(const BatchSchedule& schedule, std::span<const Label> labels);

/// sqrt(b * M) / n
double shuffling_threshold(std::uint32_t batch_size, std::uint32_t workers, std::size_t num_train);

/// Smallest S in [1, S_max] whose proximity schedule satisfies
/// epsilon <= sqrt(b * M) / |T|; S_max with threshold_met = false otherwise.
SequenceSelection select_num_sequences(const Graph& g, std::uint32_t batch_size, std::uint32_t workers,
                                       std::uint32_t max_sequences, std::uint64_t seed);

/// One batch per line, space-separated node IDs.
void save_schedule(const BatchSchedule& schedule, const std::filesystem::path& path);
BatchSchedule load_schedule(const std::filesystem::path& path);

}  // namespace gnnio
