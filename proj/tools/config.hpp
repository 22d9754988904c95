#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gnnio/cache_sim.hpp"
#include "gnnio/graph.hpp"

namespace gnnio::cli {

struct GraphSection {
  std::string file;       // edge list; empty: generate
  std::string meta_file;  // optional sidecar for a loaded edge list
  bool compact_ids = false;
  NodeId n = 100000;
  std::uint32_t avg_degree = 15;
  double train_fraction = 0.1;
  std::uint32_t num_labels = 16;
  std::uint32_t communities = 64;
  double intra_fraction = 0.9;
  std::uint32_t locality_span = 1;
  double label_noise = 0.0;
  std::uint32_t feature_dim = 128;
};

struct PartitionSection {
  std::string method = "multilevel";  // multilevel | random | one_hop
  std::uint32_t k = 4;
  std::uint32_t hops = 2;
  std::uint64_t threshold = 64;
  double percentile = 0.10;
  std::uint64_t quality_samples = 10000;
};

struct OrderSection {
  std::string policy = "proximity";  // proximity | random
  std::uint32_t batch_size = 1000;
  std::uint32_t workers = 1;
  std::uint32_t max_sequences = 10;
  std::uint32_t num_sequences = 0;  // 0: select by shuffling error
};

struct SampleSection {
  std::vector<std::uint32_t> fanouts{15, 10, 5};
};

struct CacheSection {
  std::vector<CachePolicy> policies{CachePolicy::kStaticDegree, CachePolicy::kFifo, CachePolicy::kLru,
                                    CachePolicy::kLfu};
  std::vector<double> capacities{0.01, 0.05, 0.10, 0.20};  // fractions of num_nodes, total over devices
  CachePolicy policy = CachePolicy::kFifo;                 // per-batch report
  double capacity = 0.10;
  std::uint32_t devices = 1;
  double host_capacity = 0.0;
};

struct AllocateSection {
  std::string profile;
  std::uint32_t c_gs = 0;  // 0: take from the profile file
  std::uint32_t c_wm = 0;
  std::uint32_t b_pcie = 0;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  GraphSection graph;
  PartitionSection partition;
  OrderSection order;
  SampleSection sample;
  CacheSection cache;
  AllocateSection allocate;

  /// Applies one "section.key=value" assignment. Errors name the field.
  void set(std::string_view key, std::string_view value);
  /// Range checks across fields. Errors name the field.
  void validate() const;

  /// Canonical key=value text of the fields each artifact depends on.
  std::string graph_key() const;
  std::string partition_key(std::string_view method) const;
  std::string order_key() const;
  std::string sample_key() const;
  std::string cache_key() const;
};

ExperimentConfig load_config(const std::filesystem::path& path);

/// FNV-1a, rendered as 16 hex digits.
std::string config_hash(std::string_view text);

}  // namespace gnnio::cli
