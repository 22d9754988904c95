#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gnnio/graph.hpp"
#include "gnnio/sampler.hpp"

namespace gnnio {

enum class CachePolicy { kStaticDegree, kFifo, kLru, kLfu };

std::string_view to_string(CachePolicy policy);
/// Accepts "static", "static-degree", "fifo", "lru", "lfu".
CachePolicy parse_cache_policy(std::string_view name);

struct CacheConfig {
  std::uint32_t num_devices = 1;
  std::uint64_t device_capacity = 0;  // nodes per device
  std::uint64_t host_capacity = 0;    // nodes, shared by all devices
  CachePolicy policy = CachePolicy::kFifo;
  std::uint64_t feature_bytes_per_node = 512;

  void validate() const;
};

/// Outcome of one query, recorded when SimulateOptions::record_outcomes is set.
enum class Outcome : std::uint8_t { kMiss = 0, kDeviceHit = 1, kHostHit = 2 };

struct BatchCacheStats {
  std::uint64_t device_hits = 0;  // own device and peer devices
  std::uint64_t peer_hits = 0;    // subset of device_hits served by another device
  std::uint64_t host_hits = 0;
  std::uint64_t misses = 0;

  std::uint64_t insertions = 0;        // missed nodes installed in the cache
  std::uint64_t spills = 0;            // device victims moved to the host cache
  std::uint64_t evictions = 0;         // entries displaced at any level
  std::uint64_t lookups = 0;           // cache map probes
  std::uint64_t metadata_updates = 0;  // recency/frequency touches + insertions + spills

  std::uint64_t peer_bytes = 0;
  std::uint64_t host_bytes = 0;
  std::uint64_t remote_bytes = 0;

  std::uint64_t queries() const { return device_hits + host_hits + misses; }
  double hit_ratio() const;
  BatchCacheStats& operator+=(const BatchCacheStats& other);
};

struct CacheSimReport {
  std::vector<BatchCacheStats> batches;
  std::vector<std::uint32_t> batch_device;
  std::vector<std::vector<Outcome>> outcomes;  // empty unless recorded
  BatchCacheStats total;

  double hit_ratio() const { return total.hit_ratio(); }
};

/// A single cache level over node IDs in [0, universe).
class CacheStore {
 public:
  virtual ~CacheStore() = default;

  virtual bool contains(NodeId n) const = 0;
  /// Records a hit; returns true when the policy keeps per-hit metadata.
  virtual bool touch(NodeId n) = 0;
  /// Installs n (not resident). Returns the displaced node, if any. With zero
  /// capacity nothing is stored and n itself is returned.
  virtual std::optional<NodeId> insert(NodeId n) = 0;
  virtual std::uint64_t size() const = 0;
  virtual std::uint64_t capacity() const = 0;
  /// Residents in ascending ID order.
  virtual std::vector<NodeId> residents() const = 0;
};

std::unique_ptr<CacheStore> make_cache_store(CachePolicy policy, std::uint64_t capacity, NodeId universe);

/// Two-level cache hierarchy: one store per device (node n lives on device
/// n mod d) plus one shared host store. Device victims spill into the host
/// store. Dynamic policies apply all updates after the batch's lookups, in
/// ascending node order.
class CacheSimulator {
 public:
  CacheSimulator(const CacheConfig& cfg, NodeId universe);

  /// Preloads the highest-degree nodes: each device takes its own residue
  /// class up to capacity, the host takes the next highest-degree nodes.
  /// Throws unless the policy is static-degree.
  void warm_static(const Graph& g);

  BatchCacheStats run_batch(std::span<const NodeId> nodes, std::uint32_t device,
                            std::vector<Outcome>* outcomes = nullptr);

  const CacheConfig& config() const { return cfg_; }
  const CacheStore& device_store(std::uint32_t d) const { return *devices_[d]; }
  const CacheStore& host_store() const { return *host_; }

 private:
  CacheConfig cfg_;
  NodeId universe_;
  std::vector<std::unique_ptr<CacheStore>> devices_;
  std::unique_ptr<CacheStore> host_;
  bool warmed_ = false;
  std::vector<std::uint8_t> state_;  // per-query scratch
};

struct SimulateOptions {
  std::span<const std::uint32_t> batch_device;  // default: batch i -> device i mod d
  const Graph* graph = nullptr;                 // required by the static policy
  bool record_outcomes = false;
};

CacheSimReport simulate(const AccessTrace& trace, const CacheConfig& cfg, const SimulateOptions& options = {});

struct UpdateOps {
  std::uint64_t insertions = 0;
  std::uint64_t evictions = 0;
  std::uint64_t lookups = 0;
  std::uint64_t metadata_updates = 0;
};

/// Per-batch operation counts: the desk-scale proxy for amortized cache overhead.
std::vector<UpdateOps> amortized_update_ops(const CacheSimReport& report);

struct PolicyHitRow {
  CachePolicy policy;
  std::uint64_t capacity;
  CacheSimReport report;
};

/// Runs each policy at each single-device capacity (no host cache).
std::vector<PolicyHitRow> compare_policies(const Graph& g, const AccessTrace& trace,
                                           std::span<const std::uint64_t> capacities,
                                           std::span<const CachePolicy> policies = {});

/// One row per batch plus a "total" row.
void write_cache_report_csv(std::ostream& out, const CacheSimReport& report);
/// Long format: policy,capacity,hit_ratio,... one row per sweep cell.
void write_sweep_csv(std::ostream& out, std::span<const PolicyHitRow> rows);

}  // namespace gnnio
