#include "gnnio/cache_sim.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <string>
#include <tuple>

#include "gnnio/error.hpp"
#include "gnnio/text_format.hpp"

namespace gnnio {

namespace {

constexpr NodeId kEmpty = std::numeric_limits<NodeId>::max();
constexpr std::uint64_t kAbsent = std::numeric_limits<std::uint64_t>::max();

/// Ring buffer of slots addressed by a monotonically increasing tail cursor;
/// the slot for the next insertion is tail % capacity and its occupant, if
/// any, is evicted.
class FifoStore final : public CacheStore {
 public:
  FifoStore(std::uint64_t capacity, NodeId universe) : slots_(capacity, kEmpty), slot_of_(universe, kAbsent) {}

  bool contains(NodeId n) const override { return slot_of_[n] != kAbsent; }
  bool touch(NodeId) override { return false; }

  std::optional<NodeId> insert(NodeId n) override {
    if (slots_.empty()) return n;
    const std::uint64_t pos = tail_++ % slots_.size();
    std::optional<NodeId> victim;
    if (slots_[pos] != kEmpty) {
      victim = slots_[pos];
      slot_of_[*victim] = kAbsent;
    } else {
      ++size_;
    }
    slots_[pos] = n;
    slot_of_[n] = pos;
    return victim;
  }

  std::uint64_t size() const override { return size_; }
  std::uint64_t capacity() const override { return slots_.size(); }

  std::vector<NodeId> residents() const override {
    std::vector<NodeId> out;
    for (NodeId n : slots_) {
      if (n != kEmpty) out.push_back(n);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::vector<NodeId> slots_;
  std::vector<std::uint64_t> slot_of_;
  std::uint64_t tail_ = 0;
  std::uint64_t size_ = 0;
};

/// Intrusive doubly-linked recency list over dense per-node arrays.
class LruStore final : public CacheStore {
 public:
  LruStore(std::uint64_t capacity, NodeId universe)
      : capacity_(capacity), prev_(universe, kEmpty), next_(universe, kEmpty), resident_(universe, 0) {}

  bool contains(NodeId n) const override { return resident_[n] != 0; }

  bool touch(NodeId n) override {
    unlink(n);
    push_front(n);
    return true;
  }

  std::optional<NodeId> insert(NodeId n) override {
    if (capacity_ == 0) return n;
    std::optional<NodeId> victim;
    if (size_ == capacity_) {
      victim = tail_;
      unlink(tail_);
      resident_[*victim] = 0;
      --size_;
    }
    push_front(n);
    resident_[n] = 1;
    ++size_;
    return victim;
  }

  std::uint64_t size() const override { return size_; }
  std::uint64_t capacity() const override { return capacity_; }

  std::vector<NodeId> residents() const override {
    std::vector<NodeId> out;
    for (NodeId n = head_; n != kEmpty; n = next_[n]) out.push_back(n);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  void unlink(NodeId n) {
    if (prev_[n] != kEmpty) next_[prev_[n]] = next_[n]; else head_ = next_[n];
    if (next_[n] != kEmpty) prev_[next_[n]] = prev_[n]; else tail_ = prev_[n];
    prev_[n] = next_[n] = kEmpty;
  }

  void push_front(NodeId n) {
    prev_[n] = kEmpty;
    next_[n] = head_;
    if (head_ != kEmpty) prev_[head_] = n; else tail_ = n;
    head_ = n;
  }

  std::uint64_t capacity_;
  std::uint64_t size_ = 0;
  std::vector<NodeId> prev_, next_;
  std::vector<std::uint8_t> resident_;
  NodeId head_ = kEmpty, tail_ = kEmpty;
};

/// Least frequently used; ties evict the least recently used.
class LfuStore final : public CacheStore {
 public:
  LfuStore(std::uint64_t capacity, NodeId universe) : capacity_(capacity), freq_(universe, 0), tick_(universe, 0) {}

  bool contains(NodeId n) const override { return freq_[n] != 0; }

  bool touch(NodeId n) override {
    order_.erase({freq_[n], tick_[n], n});
    ++freq_[n];
    tick_[n] = ++clock_;
    order_.insert({freq_[n], tick_[n], n});
    return true;
  }

  std::optional<NodeId> insert(NodeId n) override {
    if (capacity_ == 0) return n;
    std::optional<NodeId> victim;
    if (order_.size() == capacity_) {
      auto it = order_.begin();
      victim = std::get<2>(*it);
      freq_[*victim] = 0;
      order_.erase(it);
    }
    freq_[n] = 1;
    tick_[n] = ++clock_;
    order_.insert({1, tick_[n], n});
    return victim;
  }

  std::uint64_t size() const override { return order_.size(); }
  std::uint64_t capacity() const override { return capacity_; }

  std::vector<NodeId> residents() const override {
    std::vector<NodeId> out;
    for (const auto& e : order_) out.push_back(std::get<2>(e));
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::uint64_t capacity_;
  std::vector<std::uint64_t> freq_, tick_;
  std::uint64_t clock_ = 0;
  std::set<std::tuple<std::uint64_t, std::uint64_t, NodeId>> order_;
};

/// Contents fixed at warm-up.
class StaticStore final : public CacheStore {
 public:
  StaticStore(std::uint64_t capacity, NodeId universe) : capacity_(capacity), resident_(universe, 0) {}

  bool contains(NodeId n) const override { return resident_[n] != 0; }
  bool touch(NodeId) override { return false; }
  std::optional<NodeId> insert(NodeId n) override { return n; }
  std::uint64_t size() const override { return size_; }
  std::uint64_t capacity() const override { return capacity_; }

  std::vector<NodeId> residents() const override {
    std::vector<NodeId> out;
    for (NodeId n = 0; n < resident_.size(); ++n) {
      if (resident_[n]) out.push_back(n);
    }
    return out;
  }

  bool preload(NodeId n) {
    if (size_ == capacity_ || resident_[n]) return false;
    resident_[n] = 1;
    ++size_;
    return true;
  }

 private:
  std::uint64_t capacity_;
  std::uint64_t size_ = 0;
  std::vector<std::uint8_t> resident_;
};

}  // namespace

std::string_view to_string(CachePolicy policy) {
  switch (policy) {
    case CachePolicy::kStaticDegree: return "static";
    case CachePolicy::kFifo: return "fifo";
    case CachePolicy::kLru: return "lru";
    case CachePolicy::kLfu: return "lfu";
  }
  return "unknown";
}

CachePolicy parse_cache_policy(std::string_view name) {
  if (name == "static" || name == "static-degree") return CachePolicy::kStaticDegree;
  if (name == "fifo") return CachePolicy::kFifo;
  if (name == "lru") return CachePolicy::kLru;
  if (name == "lfu") return CachePolicy::kLfu;
  throw Error("unknown cache policy \"" + std::string(name) + "\"");
}

void CacheConfig::validate() const {
  if (num_devices < 1) throw Error("num_devices must be >= 1");
}

double BatchCacheStats::hit_ratio() const {
  auto q = queries();
  return q ? static_cast<double>(device_hits + host_hits) / static_cast<double>(q) : 0.0;
}

BatchCacheStats& BatchCacheStats::operator+=(const BatchCacheStats& o) {
  device_hits += o.device_hits;
  peer_hits += o.peer_hits;
  host_hits += o.host_hits;
  misses += o.misses;
  insertions += o.insertions;
  spills += o.spills;
  evictions += o.evictions;
  lookups += o.lookups;
  metadata_updates += o.metadata_updates;
  peer_bytes += o.peer_bytes;
  host_bytes += o.host_bytes;
  remote_bytes += o.remote_bytes;
  return *this;
}

std::unique_ptr<CacheStore> make_cache_store(CachePolicy policy, std::uint64_t capacity, NodeId universe) {
  switch (policy) {
    case CachePolicy::kStaticDegree: return std::make_unique<StaticStore>(capacity, universe);
    case CachePolicy::kFifo: return std::make_unique<FifoStore>(capacity, universe);
    case CachePolicy::kLru: return std::make_unique<LruStore>(capacity, universe);
    case CachePolicy::kLfu: return std::make_unique<LfuStore>(capacity, universe);
  }
  throw Error("unknown cache policy");
}

CacheSimulator::CacheSimulator(const CacheConfig& cfg, NodeId universe) : cfg_(cfg), universe_(universe) {
  cfg_.validate();
  for (std::uint32_t d = 0; d < cfg_.num_devices; ++d) {
    devices_.push_back(make_cache_store(cfg_.policy, cfg_.device_capacity, universe_));
  }
  host_ = make_cache_store(cfg_.policy, cfg_.host_capacity, universe_);
}

void CacheSimulator::warm_static(const Graph& g) {
  if (cfg_.policy != CachePolicy::kStaticDegree) {
    throw Error("warm_static requires the static-degree policy, got " + std::string(to_string(cfg_.policy)));
  }
  if (g.num_nodes() > universe_) throw Error("graph larger than the cache universe");
  std::vector<NodeId> order(g.num_nodes());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });

  const std::uint32_t d = cfg_.num_devices;
  std::vector<std::uint8_t> on_device(g.num_nodes(), 0);
  for (NodeId n : order) {
    if (static_cast<StaticStore&>(*devices_[n % d]).preload(n)) on_device[n] = 1;
  }
  auto& host = static_cast<StaticStore&>(*host_);
  for (NodeId n : order) {
    if (host.size() == host.capacity()) break;
    if (!on_device[n]) host.preload(n);
  }
  warmed_ = true;
}

BatchCacheStats CacheSimulator::run_batch(std::span<const NodeId> nodes, std::uint32_t device,
                                          std::vector<Outcome>* outcomes) {
  const std::uint32_t d = cfg_.num_devices;
  if (device >= d) throw Error("batch device out of range");
  const bool dynamic = cfg_.policy != CachePolicy::kStaticDegree;
  if (!dynamic && !warmed_) throw Error("static-degree cache used before warm_static");

  const std::uint64_t bytes = cfg_.feature_bytes_per_node;
  const bool has_host = cfg_.host_capacity > 0;
  BatchCacheStats st;
  state_.assign(nodes.size(), 0);
  if (outcomes) outcomes->assign(nodes.size(), Outcome::kMiss);

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const NodeId n = nodes[i];
    if (n >= universe_) throw Error("node " + std::to_string(n) + " outside the cache universe");
    const std::uint32_t owner = n % d;
    ++st.lookups;
    if (devices_[owner]->contains(n)) {
      ++st.device_hits;
      if (owner != device) {
        ++st.peer_hits;
        st.peer_bytes += bytes;
      }
      state_[i] = static_cast<std::uint8_t>(Outcome::kDeviceHit);
    } else if (has_host && (++st.lookups, host_->contains(n))) {
      ++st.host_hits;
      st.host_bytes += bytes;
      state_[i] = static_cast<std::uint8_t>(Outcome::kHostHit);
    } else {
      ++st.misses;
      st.remote_bytes += bytes;
    }
    if (outcomes) (*outcomes)[i] = static_cast<Outcome>(state_[i]);
  }
  if (!dynamic) return st;

  std::vector<std::size_t> idx(nodes.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return nodes[a] < nodes[b]; });

  auto spill = [&](NodeId victim) {
    ++st.evictions;
    if (!has_host) return;
    ++st.spills;
    ++st.metadata_updates;
    if (host_->insert(victim)) ++st.evictions;
  };

  auto install = [&](NodeId n, CacheStore& store) {
    if (store.capacity() > 0) {
      ++st.insertions;
      ++st.metadata_updates;
      if (auto victim = store.insert(n)) spill(*victim);
    } else if (has_host) {
      ++st.insertions;
      ++st.metadata_updates;
      if (host_->insert(n)) ++st.evictions;
    }
  };

  // Recency/frequency policies replay the batch as sequential accesses, so a
  // hit displaced earlier in this loop is reinstalled. FIFO only admits misses.
  const bool refresh = cfg_.policy == CachePolicy::kLru || cfg_.policy == CachePolicy::kLfu;
  for (std::size_t i : idx) {
    const NodeId n = nodes[i];
    auto& store = *devices_[n % d];
    if (store.contains(n)) {
      if (static_cast<Outcome>(state_[i]) != Outcome::kMiss && store.touch(n)) ++st.metadata_updates;
    } else if (has_host && host_->contains(n)) {
      if (static_cast<Outcome>(state_[i]) != Outcome::kMiss && host_->touch(n)) ++st.metadata_updates;
    } else if (static_cast<Outcome>(state_[i]) == Outcome::kMiss || refresh) {
      install(n, store);
    }
  }
  return st;
}

CacheSimReport simulate(const AccessTrace& trace, const CacheConfig& cfg, const SimulateOptions& options) {
  cfg.validate();
  NodeId universe = 0;
  if (options.graph) {
    universe = options.graph->num_nodes();
  } else {
    for (const auto& b : trace.batches) {
      for (NodeId n : b) universe = std::max<NodeId>(universe, n + 1);
    }
  }
  if (cfg.policy == CachePolicy::kStaticDegree && !options.graph) {
    throw Error("static-degree policy needs the graph for degree ranking");
  }
  if (!options.batch_device.empty() && options.batch_device.size() != trace.batches.size()) {
    throw Error("batch-to-device map must cover every batch");
  }

  CacheSimulator sim(cfg, universe);
  if (cfg.policy == CachePolicy::kStaticDegree) sim.warm_static(*options.graph);

  CacheSimReport report;
  for (std::size_t b = 0; b < trace.batches.size(); ++b) {
    const auto device = options.batch_device.empty() ? static_cast<std::uint32_t>(b % cfg.num_devices)
                                                     : options.batch_device[b];
    std::vector<Outcome> outcomes;
    auto st = sim.run_batch(trace.batches[b], device, options.record_outcomes ? &outcomes : nullptr);
    report.total += st;
    report.batches.push_back(st);
    report.batch_device.push_back(device);
    if (options.record_outcomes) report.outcomes.push_back(std::move(outcomes));
  }
  return report;
}

std::vector<UpdateOps> amortized_update_ops(const CacheSimReport& report) {
  std::vector<UpdateOps> ops;
  ops.reserve(report.batches.size());
  for (const auto& b : report.batches) ops.push_back({b.insertions, b.evictions, b.lookups, b.metadata_updates});
  return ops;
}

std::vector<PolicyHitRow> compare_policies(const Graph& g, const AccessTrace& trace,
                                           std::span<const std::uint64_t> capacities,
                                           std::span<const CachePolicy> policies) {
  if (trace.batches.empty()) throw Error("empty access trace");
  static constexpr CachePolicy kAll[] = {CachePolicy::kStaticDegree, CachePolicy::kFifo, CachePolicy::kLru,
                                         CachePolicy::kLfu};
  if (policies.empty()) policies = kAll;
  std::vector<PolicyHitRow> rows;
  for (auto policy : policies) {
    for (auto capacity : capacities) {
      CacheConfig cfg;
      cfg.policy = policy;
      cfg.device_capacity = capacity;
      cfg.feature_bytes_per_node = g.feature_bytes_per_node();
      SimulateOptions options;
      options.graph = &g;
      rows.push_back({policy, capacity, simulate(trace, cfg, options)});
    }
  }
  return rows;
}

namespace {

void stats_cells(CsvWriter& csv, const BatchCacheStats& s) {
  csv.cell(s.queries())
      .cell(s.device_hits)
      .cell(s.peer_hits)
      .cell(s.host_hits)
      .cell(s.misses)
      .cell(s.hit_ratio())
      .cell(s.insertions)
      .cell(s.spills)
      .cell(s.evictions)
      .cell(s.lookups)
      .cell(s.metadata_updates)
      .cell(s.peer_bytes)
      .cell(s.host_bytes)
      .cell(s.remote_bytes);
}

}  // namespace

void write_cache_report_csv(std::ostream& out, const CacheSimReport& report) {
  CsvWriter csv(out, {"batch", "device", "queries", "device_hits", "peer_hits", "host_hits", "misses", "hit_ratio",
                      "insertions", "spills", "evictions", "lookups", "metadata_updates", "peer_bytes",
                      "host_bytes", "remote_bytes"});
  for (std::size_t b = 0; b < report.batches.size(); ++b) {
    csv.cell(static_cast<unsigned long long>(b)).cell(report.batch_device[b]);
    stats_cells(csv, report.batches[b]);
    csv.end_row();
  }
  csv.cell("total").cell("all");
  stats_cells(csv, report.total);
  csv.end_row();
}

void write_sweep_csv(std::ostream& out, std::span<const PolicyHitRow> rows) {
  CsvWriter csv(out, {"policy", "capacity", "queries", "device_hits", "peer_hits", "host_hits", "misses",
                      "hit_ratio", "insertions", "spills", "evictions", "lookups", "metadata_updates",
                      "peer_bytes", "host_bytes", "remote_bytes"});
  for (const auto& row : rows) {
    csv.cell(to_string(row.policy)).cell(row.capacity);
    stats_cells(csv, row.report.total);
    csv.end_row();
  }
}

}  // namespace gnnio
