#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gnnio/graph.hpp"

namespace gnnio {

using BlockId = std::uint32_t;
using PartId = std::uint32_t;

/// Node -> block map. A block is either a connected region grown by BFS or a
/// unit produced by the random small-block merge (`merged[b] != 0`).
struct BlockAssignment {
  std::vector<BlockId> block_of;
  BlockId num_blocks = 0;
  std::vector<std::uint8_t> merged;
};

struct CoarseEdge {
  BlockId block;
  std::uint64_t multiplicity;  // original adjacency entries crossing between the two blocks

  friend bool operator==(const CoarseEdge&, const CoarseEdge&) = default;
};

/// Block-level graph. Adjacency lists are sorted by block ID and symmetric.
struct CoarsenedGraph {
  BlockId num_blocks = 0;
  std::vector<std::uint64_t> block_size;
  std::vector<std::uint64_t> block_train_count;
  std::vector<std::vector<CoarseEdge>> adjacency;
  std::vector<std::uint8_t> merged;

  std::uint64_t total_size() const;
  std::uint64_t total_train() const;
  std::uint64_t num_coarse_edges() const;  // undirected block pairs
};

struct MergeResult {
  CoarsenedGraph graph;
  std::vector<BlockId> remap;  // input block -> output block
};

struct Partitioning {
  std::vector<PartId> part_of;
  PartId k = 1;
  std::vector<std::uint64_t> part_size;
  std::vector<std::uint64_t> part_train;
};

struct PartitionQuality {
  double edge_cut_fraction = 0.0;
  double node_balance = 0.0;   // max |P(i)| / (|V| / k)
  double train_balance = 0.0;  // max |T(i)| / (|T| / k)
  double two_hop_locality = 0.0;
};

// ---------------------------------------------------------------------------
// Multi-level block partitioner

/// Multi-source BFS from `num_sources` uniformly drawn sources. Blocks grow in
/// round-robin order, one dequeued node per block per round; a block stops once
/// it holds `block_size_threshold` nodes or its frontier is empty. When every
/// block has stopped and nodes remain unvisited, a new source is drawn
/// uniformly among them.
BlockAssignment generate_blocks(const Graph& g, std::uint64_t block_size_threshold,
                                std::uint64_t num_sources, std::uint64_t seed);

/// As above with explicit initial sources (duplicates are ignored).
BlockAssignment generate_blocks_from(const Graph& g, std::uint64_t block_size_threshold,
                                     std::span<const NodeId> sources, std::uint64_t seed);

CoarsenedGraph coarsen(const Graph& g, const BlockAssignment& blocks);

/// Second coarsening level. The top `large_percentile` of blocks by size are
/// large; each small block adjacent to a large block joins its largest large
/// neighbor, and the remaining small blocks are grouped at random until a
/// group reaches the smallest large-block size.
MergeResult merge_small_blocks(const CoarsenedGraph& cg, double large_percentile, std::uint64_t seed);

struct AssignOptions {
  bool train_penalty = true;
};

struct AssignStats {
  std::uint64_t adjacency_visits = 0;  // coarse adjacency entries scanned
};

/// Greedy block placement. Blocks are visited by descending size (seeded
/// random order among equal sizes) and placed at
///
///   argmax_i  hop_weight_i * max(0, 1 - |P(i)|/C) * max(0, 1 - |T(i)|/C_T)
///
/// where hop_weight_i = sum over h = 1..hops of the node count of blocks in
/// partition i lying within h coarse hops of the block. When no score is
/// positive the block goes where max((|P|+size)/C, (|T|+train)/C_T) is
/// smallest (ties to the lowest index), looking first at partitions below
/// both capacities (only C for a block without training nodes), then at those
/// staying within C + max block size and C_T + max block training count, then
/// within the node bound only, then anywhere.
std::vector<PartId> assign_blocks(const CoarsenedGraph& cg, PartId k, std::uint32_t hops,
                                  std::uint64_t seed, const AssignOptions& options = {},
                                  AssignStats* stats = nullptr);

Partitioning uncoarsen(const Graph& g, const BlockAssignment& blocks, std::span<const BlockId> remap,
                       std::span<const PartId> block_parts, PartId k);

struct MultilevelParams {
  PartId k = 4;
  std::uint32_t hops = 2;
  std::uint64_t block_size_threshold = 64;
  std::uint64_t num_sources = 0;  // 0: ceil(num_nodes / block_size_threshold)
  double large_percentile = 0.10;
  std::uint64_t seed = 0;
};

struct MultilevelTrace {
  BlockId bfs_blocks = 0;
  BlockId merged_blocks = 0;
  std::uint64_t coarse_edges = 0;
  AssignStats assign;
};

/// generate_blocks -> coarsen -> merge_small_blocks -> assign_blocks -> uncoarsen.
Partitioning multilevel_partition(const Graph& g, const MultilevelParams& params,
                                  MultilevelTrace* trace = nullptr);

// ---------------------------------------------------------------------------
// Baselines

/// Every node i.i.d. uniform over [k].
Partitioning random_partition(const Graph& g, PartId k, std::uint64_t seed);

/// Streaming one-hop greedy over single nodes with node balancing only
/// (assign_blocks with hops = 1 and no training penalty on the identity blocks).
Partitioning one_hop_greedy_partition(const Graph& g, PartId k, std::uint64_t seed);

// ---------------------------------------------------------------------------

/// Recomputes per-partition counts from part_of. Throws on out-of-range IDs.
Partitioning make_partitioning(const Graph& g, std::vector<PartId> part_of, PartId k);

/// Edge cut is exact; two-hop locality is estimated from `sample_size` random
/// walks u -> v -> w and counts how often u and w share a partition.
PartitionQuality partition_quality(const Graph& g, const Partitioning& p, std::uint64_t sample_size,
                                   std::uint64_t seed);

/// "node_id partition_id" per line.
void save_partitioning(const Partitioning& p, const std::filesystem::path& path);
Partitioning load_partitioning(const Graph& g, const std::filesystem::path& path);

void write_quality_csv_header(std::ostream& out);
void write_quality_csv_row(std::ostream& out, const std::string& method, PartId k,
                           const PartitionQuality& q);

}  // namespace gnnio
