#include "gnnio/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "gnnio/error.hpp"

namespace gnnio {

namespace {

void check_csr(std::span<const EdgeOffset> offsets, std::span<const NodeId> cols) {
  if (offsets.empty() || offsets.front() != 0) throw Error("row_offsets must start at 0");
  if (offsets.back() != cols.size()) throw Error("row_offsets must end at num_edges");
  const auto n = offsets.size() - 1;
  for (std::size_t v = 0; v < n; ++v) {
    if (offsets[v] > offsets[v + 1]) {
      throw Error("row_offsets decreases at node " + std::to_string(v));
    }
    for (auto e = offsets[v]; e < offsets[v + 1]; ++e) {
      if (cols[e] >= n) throw Error("neighbor out of range at node " + std::to_string(v));
      if (e > offsets[v] && cols[e - 1] >= cols[e]) {
        throw Error("adjacency of node " + std::to_string(v) + " is not sorted and unique");
      }
    }
  }
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

Graph::Graph(std::vector<EdgeOffset> row_offsets, std::vector<NodeId> col_indices)
    : row_offsets_(std::move(row_offsets)), col_indices_(std::move(col_indices)) {
  check_csr(row_offsets_, col_indices_);
  num_nodes_ = static_cast<NodeId>(row_offsets_.size() - 1);
  train_mask_.assign(num_nodes_, 0);
}

Graph Graph::from_edges(NodeId num_nodes, std::span<const Edge> edges, bool undirected) {
  std::vector<EdgeOffset> offsets(static_cast<std::size_t>(num_nodes) + 1, 0);
  auto count = [&](NodeId s, NodeId d) {
    if (s >= num_nodes || d >= num_nodes) throw Error("edge endpoint out of range");
    if (s != d) ++offsets[s + 1];
  };
  for (const auto& e : edges) {
    count(e.src, e.dst);
    if (undirected) count(e.dst, e.src);
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());

  std::vector<NodeId> cols(offsets.back());
  std::vector<EdgeOffset> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& e : edges) {
    if (e.src == e.dst) continue;
    cols[cursor[e.src]++] = e.dst;
    if (undirected) cols[cursor[e.dst]++] = e.src;
  }

  // Sort and deduplicate each list, compacting in place.
  std::vector<EdgeOffset> compact(offsets.size(), 0);
  EdgeOffset out = 0;
  for (NodeId v = 0; v < num_nodes; ++v) {
    auto first = cols.begin() + static_cast<std::ptrdiff_t>(offsets[v]);
    auto last = cols.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]);
    std::sort(first, last);
    last = std::unique(first, last);
    auto dest = cols.begin() + static_cast<std::ptrdiff_t>(out);
    out += static_cast<EdgeOffset>(last - first);
    std::move(first, last, dest);
    compact[v + 1] = out;
  }
  cols.resize(out);
  cols.shrink_to_fit();
  return Graph(std::move(compact), std::move(cols));
}

void Graph::set_labels(std::vector<Label> labels) {
  if (!labels.empty() && labels.size() != num_nodes_) throw Error("labels size mismatch");
  labels_ = std::move(labels);
}

void Graph::set_train_mask(std::vector<std::uint8_t> mask) {
  if (mask.size() != num_nodes_) throw Error("train_mask size mismatch");
  train_mask_ = std::move(mask);
  training_nodes_.clear();
  for (NodeId v = 0; v < num_nodes_; ++v) {
    if (train_mask_[v]) training_nodes_.push_back(v);
  }
}

void Graph::set_feature_dim(std::uint32_t dim, std::optional<std::uint64_t> bytes_per_node) {
  feature_dim_ = dim;
  feature_bytes_per_node_ = bytes_per_node.value_or(static_cast<std::uint64_t>(dim) * 4);
}

void Graph::set_original_ids(std::vector<std::uint64_t> ids) {
  if (!ids.empty() && ids.size() != num_nodes_) throw Error("original_ids size mismatch");
  original_ids_ = std::move(ids);
}

void Graph::validate() const {
  if (row_offsets_.size() != static_cast<std::size_t>(num_nodes_) + 1) {
    throw Error("row_offsets length must be num_nodes + 1");
  }
  check_csr(row_offsets_, col_indices_);
  if (train_mask_.size() != num_nodes_) throw Error("train_mask size mismatch");
  if (has_labels()) {
    for (NodeId v : training_nodes_) {
      if (labels_[v] == kNoLabel) throw Error("training node " + std::to_string(v) + " has no label");
    }
  }
}

GraphStats graph_stats(const Graph& g) {
  GraphStats stats;
  DisjointSets sets(g.num_nodes());
  std::uint64_t components = g.num_nodes();
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    ++stats.degree_histogram[g.degree(v)];
    for (NodeId u : g.neighbors(v)) {
      if (sets.unite(v, u)) --components;
    }
  }
  stats.num_components = components;
  stats.num_train = g.num_train();
  return stats;
}

}  // namespace gnnio
