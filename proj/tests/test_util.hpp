#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "gnnio/graph.hpp"

namespace gnnio::testing {

/// Erdos-Renyi style multigraph input (duplicates and self-loops included on
/// purpose) with random labels and a random training mask.
inline Graph random_graph(NodeId n, std::size_t edges, std::uint64_t seed, std::uint32_t labels = 3,
                          double train_p = 0.4) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<NodeId> node(0, n - 1);
  std::vector<Edge> list;
  for (std::size_t i = 0; i < edges; ++i) list.push_back({node(rng), node(rng)});
  Graph g = Graph::from_edges(n, list, true);
  std::uniform_int_distribution<Label> label(0, static_cast<Label>(labels) - 1);
  std::bernoulli_distribution train(train_p);
  std::vector<Label> l(n);
  std::vector<std::uint8_t> mask(n);
  for (NodeId v = 0; v < n; ++v) {
    l[v] = label(rng);
    mask[v] = train(rng) ? 1 : 0;
  }
  if (n > 0) mask[node(rng)] = 1;
  g.set_labels(std::move(l));
  g.set_train_mask(std::move(mask));
  return g;
}

inline Graph path_graph(NodeId n) {
  std::vector<Edge> e;
  for (NodeId v = 0; v + 1 < n; ++v) e.push_back({v, v + 1});
  Graph g = Graph::from_edges(n, e, true);
  g.set_train_mask(std::vector<std::uint8_t>(n, 1));
  return g;
}

inline Graph star_graph(NodeId leaves) {
  std::vector<Edge> e;
  for (NodeId v = 1; v <= leaves; ++v) e.push_back({0, v});
  Graph g = Graph::from_edges(leaves + 1, e, true);
  g.set_train_mask(std::vector<std::uint8_t>(leaves + 1, 1));
  return g;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("gnnio-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace gnnio::testing
