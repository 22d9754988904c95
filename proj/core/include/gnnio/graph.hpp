#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace gnnio {

using NodeId = std::uint32_t;
using EdgeOffset = std::uint64_t;
using Label = std::int32_t;

inline constexpr Label kNoLabel = -1;

struct Edge {
  NodeId src;
  NodeId dst;
};

/// CSR adjacency with per-node metadata. Node features are never stored; only
/// their dimension and byte size are tracked.
///
/// A Graph is filled in during construction (topology, then metadata) and is
/// read-only afterwards; concurrent readers need no synchronization.
class Graph {
 public:
  Graph() = default;

  /// Adopts CSR arrays. Throws gnnio::Error when an invariant is violated:
  /// offsets must start at 0, be nondecreasing and end at col_indices.size();
  /// every adjacency list must be sorted, duplicate-free and in range.
  Graph(std::vector<EdgeOffset> row_offsets, std::vector<NodeId> col_indices);

  /// Builds a CSR from an edge list. Self-loops and duplicates are dropped;
  /// `undirected` inserts both directions of every edge.
  static Graph from_edges(NodeId num_nodes, std::span<const Edge> edges, bool undirected);

  NodeId num_nodes() const noexcept { return num_nodes_; }
  EdgeOffset num_edges() const noexcept { return static_cast<EdgeOffset>(col_indices_.size()); }

  std::span<const EdgeOffset> row_offsets() const noexcept { return row_offsets_; }
  std::span<const NodeId> col_indices() const noexcept { return col_indices_; }

  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {col_indices_.data() + row_offsets_[v], col_indices_.data() + row_offsets_[v + 1]};
  }
  std::uint32_t degree(NodeId v) const noexcept {
    return static_cast<std::uint32_t>(row_offsets_[v + 1] - row_offsets_[v]);
  }

  // Metadata.
  bool has_labels() const noexcept { return !labels_.empty(); }
  std::span<const Label> labels() const noexcept { return labels_; }
  Label label(NodeId v) const noexcept { return labels_.empty() ? kNoLabel : labels_[v]; }

  std::span<const std::uint8_t> train_mask() const noexcept { return train_mask_; }
  bool is_train(NodeId v) const noexcept { return train_mask_[v] != 0; }
  /// Training nodes in ascending ID order.
  std::span<const NodeId> training_nodes() const noexcept { return training_nodes_; }
  std::size_t num_train() const noexcept { return training_nodes_.size(); }

  std::uint32_t feature_dim() const noexcept { return feature_dim_; }
  std::uint64_t feature_bytes_per_node() const noexcept { return feature_bytes_per_node_; }

  /// Original IDs for graphs loaded with ID compaction; empty otherwise.
  std::span<const std::uint64_t> original_ids() const noexcept { return original_ids_; }

  void set_labels(std::vector<Label> labels);
  void set_train_mask(std::vector<std::uint8_t> mask);
  /// Sets the dimension; byte size defaults to 4 bytes per dimension (float32).
  void set_feature_dim(std::uint32_t dim, std::optional<std::uint64_t> bytes_per_node = std::nullopt);
  void set_original_ids(std::vector<std::uint64_t> ids);

  /// Throws gnnio::Error on the first violated invariant, including
  /// "every training node has a label" when labels are present.
  void validate() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  NodeId num_nodes_ = 0;
  std::vector<EdgeOffset> row_offsets_{0};
  std::vector<NodeId> col_indices_;
  std::vector<Label> labels_;
  std::vector<std::uint8_t> train_mask_;
  std::vector<NodeId> training_nodes_;
  std::uint32_t feature_dim_ = 0;
  std::uint64_t feature_bytes_per_node_ = 0;
  std::vector<std::uint64_t> original_ids_;
};

struct GraphStats {
  std::map<std::uint32_t, std::uint64_t> degree_histogram;  // degree -> node count
  std::uint64_t num_components = 0;                          // weakly connected
  std::uint64_t num_train = 0;
};

GraphStats graph_stats(const Graph& g);

// ---------------------------------------------------------------------------
// Text I/O

struct LoadOptions {
  bool undirected = true;
  /// Remap IDs to 0..n-1 in order of first appearance and keep the originals
  /// in Graph::original_ids(). Off: num_nodes = max ID + 1.
  bool compact_ids = false;
};

/// Reads whitespace-separated "src dst" pairs. Lines starting with '#' are
/// comments, except "# nodes N" which fixes num_nodes (trailing isolated nodes).
Graph load_edge_list(const std::filesystem::path& path, const LoadOptions& options = {});

/// Writes every adjacency entry as "src dst", preceded by a "# nodes N" line.
/// Loading the file back with undirected=false reproduces the CSR exactly.
void save_edge_list(const Graph& g, const std::filesystem::path& path);

/// Sidecar columns "node_id label is_train" plus a "# feature_dim D" header.
/// Label -1 marks an unlabeled node.
void save_metadata(const Graph& g, const std::filesystem::path& path);
void load_metadata(Graph& g, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Synthetic generators

struct PowerLawOptions {
  /// Planted communities occupying contiguous ID ranges. 0 means num_labels.
  std::uint32_t num_communities = 0;
  /// Probability that an attachment target is drawn from the new node's own
  /// community instead of the whole graph.
  double intra_fraction = 0.9;
  /// Communities sit on a ring. When nonzero, the remaining attachments go to
  /// a community at ring distance 1..span; zero means anywhere in the graph.
  std::uint32_t locality_span = 1;
  /// Probability that a node's label is replaced by a uniformly random one.
  double label_noise = 0.0;
  std::uint32_t feature_dim = 128;
};

/// Undirected preferential-attachment graph with planted communities.
/// Nodes arrive in a seeded random order and each attaches about
/// avg_degree/2 edges to degree-weighted targets. Node v belongs to community
/// v * communities / n and carries label community % num_labels. Exactly
/// floor(train_fraction * n) training nodes are drawn without replacement.
Graph generate_power_law(NodeId n, std::uint32_t avg_degree, std::uint64_t seed,
                         double train_fraction, std::uint32_t num_labels,
                         const PowerLawOptions& options = {});

/// Selects exactly floor(fraction * n) training nodes without replacement.
std::vector<std::uint8_t> sample_train_mask(NodeId n, double fraction, std::uint64_t seed);

}  // namespace gnnio
