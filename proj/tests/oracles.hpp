#pragma once

// Straightforward reference implementations checked against the library.

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <list>
#include <map>
#include <set>
#include <vector>

#include "gnnio/allocator.hpp"
#include "gnnio/cache_sim.hpp"
#include "gnnio/partitioner.hpp"

namespace gnnio::testing {

/// FIFO cache as one std::deque per device. Per batch: look everything up,
/// then push the misses in ascending ID order, popping the front when full.
class FifoQueueOracle {
 public:
  FifoQueueOracle(std::uint32_t devices, std::size_t capacity) : queues_(devices), capacity_(capacity) {}

  std::vector<bool> run_batch(const std::vector<NodeId>& batch) {
    std::vector<bool> hit;
    std::vector<NodeId> misses;
    for (NodeId n : batch) {
      const auto& q = queues_[n % queues_.size()];
      bool found = std::find(q.begin(), q.end(), n) != q.end();
      hit.push_back(found);
      if (!found) misses.push_back(n);
    }
    std::sort(misses.begin(), misses.end());
    for (NodeId n : misses) {
      auto& q = queues_[n % queues_.size()];
      if (capacity_ == 0) continue;
      if (q.size() == capacity_) q.pop_front();
      q.push_back(n);
    }
    return hit;
  }

  std::vector<NodeId> residents(std::uint32_t device) const {
    std::vector<NodeId> r(queues_[device].begin(), queues_[device].end());
    std::sort(r.begin(), r.end());
    return r;
  }

 private:
  std::vector<std::deque<NodeId>> queues_;
  std::size_t capacity_;
};

/// Single-level LRU over a std::list, replaying each batch in ascending ID
/// order after its lookups.
class LruListOracle {
 public:
  explicit LruListOracle(std::size_t capacity) : capacity_(capacity) {}

  std::vector<bool> run_batch(const std::vector<NodeId>& batch) {
    std::vector<bool> hit;
    for (NodeId n : batch) hit.push_back(std::find(order_.begin(), order_.end(), n) != order_.end());
    std::vector<NodeId> sorted = batch;
    std::sort(sorted.begin(), sorted.end());
    for (NodeId n : sorted) {
      auto it = std::find(order_.begin(), order_.end(), n);
      if (it != order_.end()) order_.erase(it);
      else if (capacity_ == 0) continue;
      else if (order_.size() == capacity_) order_.pop_back();
      order_.push_front(n);
    }
    return hit;
  }

 private:
  std::list<NodeId> order_;  // front = most recent
  std::size_t capacity_;
};

struct BruteAllocation {
  double bottleneck = std::numeric_limits<double>::infinity();
  std::uint64_t plans = 0;
};

/// Every (c1, c2, c3, c4, b_I, b_II) >= 1 with c1+c2 <= C_gs, c3+c4 <= C_wm,
/// b_I+b_II <= B_pcie.
inline BruteAllocation brute_force_allocation(const PipelineProfile& p, const CacheCostModel& m,
                                              const Capacities& caps) {
  BruteAllocation best;
  for (std::uint32_t c1 = 1; c1 < caps.c_gs; ++c1)
    for (std::uint32_t c2 = 1; c1 + c2 <= caps.c_gs; ++c2)
      for (std::uint32_t c3 = 1; c3 < caps.c_wm; ++c3)
        for (std::uint32_t c4 = 1; c3 + c4 <= caps.c_wm; ++c4)
          for (std::uint32_t b1 = 1; b1 < caps.b_pcie; ++b1)
            for (std::uint32_t b2 = 1; b1 + b2 <= caps.b_pcie; ++b2) {
              ++best.plans;
              double t = p.t_net;
              t = std::max(t, p.t_gpu);
              t = std::max(t, p.t1 / c1);
              t = std::max(t, p.t2 / c2);
              t = std::max(t, p.t3 / c3);
              t = std::max(t, m.a / c4 + m.d);
              t = std::max(t, p.d_1 / (b1 * p.bytes_per_unit));
              t = std::max(t, p.d_2 / (b2 * p.bytes_per_unit));
              best.bottleneck = std::min(best.bottleneck, t);
            }
  return best;
}

/// All-pairs hop distances on the coarse graph (Floyd-Warshall).
inline std::vector<std::vector<std::uint32_t>> coarse_distances(const CoarsenedGraph& cg) {
  const std::uint32_t inf = std::numeric_limits<std::uint32_t>::max() / 4;
  const BlockId n = cg.num_blocks;
  std::vector<std::vector<std::uint32_t>> d(n, std::vector<std::uint32_t>(n, inf));
  for (BlockId a = 0; a < n; ++a) {
    d[a][a] = 0;
    for (const auto& e : cg.adjacency[a]) d[a][e.block] = 1;
  }
  for (BlockId m = 0; m < n; ++m)
    for (BlockId a = 0; a < n; ++a)
      for (BlockId b = 0; b < n; ++b) d[a][b] = std::min(d[a][b], d[a][m] + d[m][b]);
  return d;
}

/// Greedy assignment written directly from the scoring formula. Only valid
/// when block sizes are pairwise distinct (visit order is then fixed).
inline std::vector<PartId> assign_oracle(const CoarsenedGraph& cg, PartId k, std::uint32_t hops, bool train_penalty) {
  const auto dist = coarse_distances(cg);
  std::vector<BlockId> order(cg.num_blocks);
  for (BlockId b = 0; b < cg.num_blocks; ++b) order[b] = b;
  std::sort(order.begin(), order.end(), [&](BlockId a, BlockId b) { return cg.block_size[a] > cg.block_size[b]; });
  double total = 0, total_train = 0;
  for (BlockId b = 0; b < cg.num_blocks; ++b) {
    total += static_cast<double>(cg.block_size[b]);
    total_train += static_cast<double>(cg.block_train_count[b]);
  }
  const double C = total / k, CT = total_train / k;
  std::vector<double> P(k, 0), T(k, 0);
  std::vector<PartId> part(cg.num_blocks, std::numeric_limits<PartId>::max());
  for (BlockId b : order) {
    PartId best = std::numeric_limits<PartId>::max();
    double best_score = 0;
    for (PartId i = 0; i < k; ++i) {
      double neighbor = 0;
      for (std::uint32_t j = 1; j <= hops; ++j) {
        for (BlockId x = 0; x < cg.num_blocks; ++x) {
          if (x != b && part[x] == i && dist[b][x] <= j) neighbor += static_cast<double>(cg.block_size[x]);
        }
      }
      double score = neighbor * std::max(0.0, C > 0 ? 1 - P[i] / C : 1.0);
      if (train_penalty && CT > 0) score *= std::max(0.0, 1 - T[i] / CT);
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    if (best == std::numeric_limits<PartId>::max()) {
      // Scan tier by tier: room under both capacities, room within one
      // maximal block of overshoot on both counts, on nodes only, anywhere.
      const double max_size = static_cast<double>(*std::max_element(cg.block_size.begin(), cg.block_size.end()));
      const double max_train =
          static_cast<double>(*std::max_element(cg.block_train_count.begin(), cg.block_train_count.end()));
      const double s = static_cast<double>(cg.block_size[b]), t = static_cast<double>(cg.block_train_count[b]);
      auto eligible = [&](PartId i, int tier) {
        switch (tier) {
          case 0:
            return !(C > 0 && P[i] >= C) && (t == 0 || !(train_penalty && CT > 0 && T[i] >= CT));
          case 1:
            return P[i] + s <= C + max_size && (!train_penalty || T[i] + t <= CT + max_train);
          case 2:
            return P[i] + s <= C + max_size;
          default:
            return true;
        }
      };
      for (int tier = 0; tier < 4 && best == std::numeric_limits<PartId>::max(); ++tier) {
        double least = std::numeric_limits<double>::infinity();
        for (PartId i = 0; i < k; ++i) {
          if (!eligible(i, tier)) continue;
          double v = C > 0 ? (P[i] + s) / C : 0;
          if (train_penalty && CT > 0) v = std::max(v, (T[i] + t) / CT);
          if (v < least) {
            least = v;
            best = i;
          }
        }
      }
    }
    part[b] = best;
    P[best] += static_cast<double>(cg.block_size[b]);
    T[best] += static_cast<double>(cg.block_train_count[b]);
  }
  return part;
}

/// Per-batch TV distance against the whole-schedule label frequencies.
inline std::vector<double> tv_oracle(const std::vector<std::vector<NodeId>>& batches, std::span<const Label> labels) {
  std::map<Label, double> global;
  double total = 0;
  for (const auto& b : batches)
    for (NodeId v : b) {
      global[labels[v]] += 1;
      total += 1;
    }
  std::vector<double> out;
  for (const auto& b : batches) {
    std::map<Label, double> local;
    for (NodeId v : b) local[labels[v]] += 1;
    double tv = 0;
    for (const auto& [l, c] : global) {
      double f = local.count(l) ? local[l] / static_cast<double>(b.size()) : 0.0;
      tv += std::abs(f - c / total);
    }
    out.push_back(tv / 2);
  }
  return out;
}

}  // namespace gnnio::testing
