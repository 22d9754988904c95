#pragma once

// Randomized invariant checks over small instances. Each check_* function
// returns an empty string on success or a description of the first violation.

#include <algorithm>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>

#include "gnnio/cache_sim.hpp"
#include "gnnio/ordering.hpp"
#include "gnnio/partitioner.hpp"
#include "gnnio/sampler.hpp"
#include "test_util.hpp"

namespace gnnio::testing {

struct PropertyRun {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
};

template <typename Check>
PropertyRun run_property(std::size_t cases, std::uint64_t base_seed, Check check) {
  PropertyRun run;
  for (std::size_t i = 0; i < cases; ++i) {
    const std::uint64_t seed = base_seed * 1000003 + i;
    std::string why = check(seed);
    ++run.cases;
    if (!why.empty()) {
      if (run.failures++ == 0) run.first_failure = "seed " + std::to_string(seed) + ": " + why;
    }
  }
  return run;
}

inline Graph small_random_graph(std::mt19937_64& rng, NodeId max_nodes = 60) {
  const NodeId n = 2 + static_cast<NodeId>(rng() % (max_nodes - 1));
  const std::size_t m = rng() % (3 * std::size_t{n} + 1);
  const std::uint32_t labels = 1 + static_cast<std::uint32_t>(rng() % 4);
  return random_graph(n, m, rng(), labels, 0.1 + 0.8 * static_cast<double>(rng() % 100) / 100.0);
}

#define GNNIO_REQUIRE(cond, msg) \
  do {                           \
    if (!(cond)) return msg;     \
  } while (0)

inline std::string check_counts(const Graph& g, const Partitioning& p) {
  GNNIO_REQUIRE(p.part_of.size() == g.num_nodes(), "part_of not total");
  std::vector<std::uint64_t> size(p.k, 0), train(p.k, 0);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    GNNIO_REQUIRE(p.part_of[v] < p.k, "partition id out of range");
    ++size[p.part_of[v]];
    train[p.part_of[v]] += g.is_train(v);
  }
  GNNIO_REQUIRE(size == p.part_size, "part_size inconsistent with part_of");
  GNNIO_REQUIRE(train == p.part_train, "part_train inconsistent with part_of");
  return {};
}

inline std::string check_partition_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Graph g = small_random_graph(rng);
  const NodeId n = g.num_nodes();
  const std::uint64_t threshold = 1 + rng() % 10;
  const std::uint64_t sources = 1 + rng() % 6;

  BlockAssignment blocks = generate_blocks(g, threshold, sources, rng());
  GNNIO_REQUIRE(blocks.block_of.size() == n, "block map not total");
  std::vector<std::vector<NodeId>> members(blocks.num_blocks);
  for (NodeId v = 0; v < n; ++v) {
    GNNIO_REQUIRE(blocks.block_of[v] < blocks.num_blocks, "block id out of range");
    members[blocks.block_of[v]].push_back(v);
  }
  for (BlockId b = 0; b < blocks.num_blocks; ++b) {
    GNNIO_REQUIRE(!members[b].empty(), "block ids not dense");
    GNNIO_REQUIRE(members[b].size() <= threshold, "block exceeds threshold");
    // Connected within the block.
    std::set<NodeId> seen{members[b][0]};
    std::queue<NodeId> q;
    q.push(members[b][0]);
    while (!q.empty()) {
      NodeId v = q.front();
      q.pop();
      for (NodeId u : g.neighbors(v))
        if (blocks.block_of[u] == b && seen.insert(u).second) q.push(u);
    }
    GNNIO_REQUIRE(seen.size() == members[b].size(), "BFS block is not connected");
  }

  CoarsenedGraph cg = coarsen(g, blocks);
  GNNIO_REQUIRE(cg.total_size() == n, "coarsen lost nodes");
  GNNIO_REQUIRE(cg.total_train() == g.num_train(), "coarsen lost training nodes");
  for (BlockId a = 0; a < cg.num_blocks; ++a)
    for (const auto& e : cg.adjacency[a]) {
      const auto& back = cg.adjacency[e.block];
      bool mirrored = std::any_of(back.begin(), back.end(), [&](const CoarseEdge& x) {
        return x.block == a && x.multiplicity == e.multiplicity;
      });
      GNNIO_REQUIRE(mirrored, "coarse adjacency not symmetric");
    }

  MergeResult merged = merge_small_blocks(cg, 0.05 + 0.5 * static_cast<double>(rng() % 100) / 100.0, rng());
  GNNIO_REQUIRE(merged.graph.total_size() == n, "merge lost nodes");
  GNNIO_REQUIRE(merged.graph.total_train() == g.num_train(), "merge lost training nodes");
  GNNIO_REQUIRE(merged.remap.size() == cg.num_blocks, "remap not total");
  for (BlockId r : merged.remap) GNNIO_REQUIRE(r < merged.graph.num_blocks, "remap out of range");

  const PartId k = 1 + static_cast<PartId>(rng() % std::min<BlockId>(5, merged.graph.num_blocks));
  const std::uint32_t hops = 1 + static_cast<std::uint32_t>(rng() % 3);
  auto parts = assign_blocks(merged.graph, k, hops, rng());
  GNNIO_REQUIRE(parts.size() == merged.graph.num_blocks, "assignment not total");
  Partitioning p = uncoarsen(g, blocks, merged.remap, parts, k);
  if (auto why = check_counts(g, p); !why.empty()) return why;
  GNNIO_REQUIRE(std::accumulate(p.part_size.begin(), p.part_size.end(), std::uint64_t{0}) == n, "sizes do not sum");
  GNNIO_REQUIRE(std::accumulate(p.part_train.begin(), p.part_train.end(), std::uint64_t{0}) == g.num_train(),
                "training counts do not sum");

  const std::uint64_t max_size = *std::max_element(merged.graph.block_size.begin(), merged.graph.block_size.end());
  const std::uint64_t max_train =
      *std::max_element(merged.graph.block_train_count.begin(), merged.graph.block_train_count.end());
  const double C = static_cast<double>(n) / k, CT = static_cast<double>(g.num_train()) / k;
  for (PartId i = 0; i < k; ++i) {
    GNNIO_REQUIRE(static_cast<double>(p.part_size[i]) <= C + static_cast<double>(max_size) + 1e-9,
                  "node capacity bound violated");
    GNNIO_REQUIRE(static_cast<double>(p.part_train[i]) <= CT + static_cast<double>(max_train) + 1e-9,
                  "training capacity bound violated");
  }

  MultilevelParams params;
  params.k = static_cast<PartId>(1 + rng() % std::min<NodeId>(4, n));
  params.hops = hops;
  params.block_size_threshold = threshold;
  params.seed = rng();
  Partitioning ml = multilevel_partition(g, params);
  if (auto why = check_counts(g, ml); !why.empty()) return "multilevel: " + why;
  GNNIO_REQUIRE(ml.part_of == multilevel_partition(g, params).part_of, "multilevel not deterministic");
  if (auto why = check_counts(g, random_partition(g, params.k, params.seed)); !why.empty()) return "random: " + why;
  if (auto why = check_counts(g, one_hop_greedy_partition(g, params.k, params.seed)); !why.empty())
    return "one_hop: " + why;
  return {};
}

inline std::string check_schedule(const Graph& g, const BatchSchedule& s, std::uint32_t b) {
  std::vector<NodeId> all;
  for (std::size_t i = 0; i < s.batches.size(); ++i) {
    GNNIO_REQUIRE(!s.batches[i].empty(), "empty batch");
    if (i + 1 < s.batches.size()) GNNIO_REQUIRE(s.batches[i].size() == b, "short batch before the last");
    GNNIO_REQUIRE(s.batches[i].size() <= b, "oversized batch");
    all.insert(all.end(), s.batches[i].begin(), s.batches[i].end());
  }
  std::sort(all.begin(), all.end());
  GNNIO_REQUIRE(std::equal(all.begin(), all.end(), g.training_nodes().begin(), g.training_nodes().end()),
                "batches are not a permutation of the training set");
  return {};
}

inline std::string check_schedule_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Graph g = small_random_graph(rng, 80);
  const std::uint32_t b = 1 + static_cast<std::uint32_t>(rng() % 30);
  const std::uint32_t S = 1 + static_cast<std::uint32_t>(rng() % std::min<std::size_t>(8, g.num_train()));

  BatchSchedule prox = proximity_schedule(g, S, b, rng());
  if (auto why = check_schedule(g, prox, b); !why.empty()) return "proximity: " + why;
  BatchSchedule rnd = random_shuffle_schedule(g, b, rng());
  if (auto why = check_schedule(g, rnd, b); !why.empty()) return "random: " + why;

  auto seqs = generate_bfs_sequences(g, S, rng());
  for (auto& q : seqs) q = random_shift(q, rng());
  if (auto why = check_schedule(g, form_batches(seqs, b), b); !why.empty()) return "shifted: " + why;

  for (const BatchSchedule* s : {&prox, &rnd}) {
    ShufflingErrorReport r = shuffling_error(*s, g.labels());
    GNNIO_REQUIRE(r.epsilon >= 0 && r.epsilon <= 1, "epsilon outside [0,1]");
    for (double tv : r.batch_tv) GNNIO_REQUIRE(tv >= 0 && tv <= 1 + 1e-12, "TV outside [0,1]");
  }
  std::vector<Label> constant(g.num_nodes(), 0);
  GNNIO_REQUIRE(shuffling_error(prox, constant).epsilon == 0.0, "constant labels gave nonzero epsilon");
  return {};
}

inline std::string check_cache_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const NodeId universe = 2 + static_cast<NodeId>(rng() % 60);
  const CachePolicy policies[] = {CachePolicy::kStaticDegree, CachePolicy::kFifo, CachePolicy::kLru, CachePolicy::kLfu};
  CacheConfig cfg;
  cfg.policy = policies[rng() % 4];
  cfg.num_devices = 1 + static_cast<std::uint32_t>(rng() % 4);
  cfg.device_capacity = rng() % 12;
  cfg.host_capacity = rng() % 12;
  Graph g = random_graph(universe, rng() % (3 * std::size_t{universe}), rng());

  CacheSimulator sim(cfg, universe);
  if (cfg.policy == CachePolicy::kStaticDegree) sim.warm_static(g);
  std::vector<std::vector<NodeId>> before;
  for (std::uint32_t d = 0; d < cfg.num_devices; ++d) before.push_back(sim.device_store(d).residents());
  auto host_before = sim.host_store().residents();

  std::vector<NodeId> ids(universe);
  std::iota(ids.begin(), ids.end(), 0);
  BatchCacheStats total;
  const std::size_t batches = 1 + rng() % 30;
  for (std::size_t i = 0; i < batches; ++i) {
    std::shuffle(ids.begin(), ids.end(), rng);
    std::vector<NodeId> batch(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(1 + rng() % universe));
    BatchCacheStats s = sim.run_batch(batch, static_cast<std::uint32_t>(rng() % cfg.num_devices));
    GNNIO_REQUIRE(s.queries() == batch.size(), "hits + misses != queries");
    GNNIO_REQUIRE(s.peer_hits <= s.device_hits, "peer hits exceed device hits");
    GNNIO_REQUIRE(s.hit_ratio() >= 0 && s.hit_ratio() <= 1, "hit ratio outside [0,1]");
    total += s;

    std::set<NodeId> resident;
    for (std::uint32_t d = 0; d < cfg.num_devices; ++d) {
      const auto& store = sim.device_store(d);
      GNNIO_REQUIRE(store.size() <= cfg.device_capacity, "device over capacity");
      for (NodeId n : store.residents()) {
        GNNIO_REQUIRE(n % cfg.num_devices == d, "node resident on the wrong device");
        GNNIO_REQUIRE(resident.insert(n).second, "node resident twice");
      }
    }
    GNNIO_REQUIRE(sim.host_store().size() <= cfg.host_capacity, "host over capacity");
    for (NodeId n : sim.host_store().residents())
      GNNIO_REQUIRE(resident.insert(n).second, "node both on a device and on the host");
    if (cfg.policy == CachePolicy::kStaticDegree) {
      for (std::uint32_t d = 0; d < cfg.num_devices; ++d)
        GNNIO_REQUIRE(sim.device_store(d).residents() == before[d], "static device cache changed");
      GNNIO_REQUIRE(sim.host_store().residents() == host_before, "static host cache changed");
      GNNIO_REQUIRE(s.insertions == 0, "static cache inserted");
    }
  }
  GNNIO_REQUIRE(total.queries() == total.device_hits + total.host_hits + total.misses, "total not conserved");
  return {};
}

inline std::string check_sampler_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Graph g = small_random_graph(rng, 80);
  SamplingConfig cfg;
  cfg.fanouts.clear();
  const std::size_t hops = 1 + rng() % 3;
  for (std::size_t h = 0; h < hops; ++h) cfg.fanouts.push_back(1 + static_cast<std::uint32_t>(rng() % 5));
  cfg.batch_size = 1 + static_cast<std::uint32_t>(rng() % 10);
  cfg.seed = rng();

  std::vector<NodeId> seeds;
  for (std::size_t i = 0, m = 1 + rng() % 6; i < m; ++i) seeds.push_back(static_cast<NodeId>(rng() % g.num_nodes()));
  const std::uint64_t bs = rng();
  SampledBatch a = sample_batch(g, seeds, cfg, bs);
  SampledBatch b = sample_batch(g, seeds, cfg, bs);
  GNNIO_REQUIRE(a.hops == b.hops && a.distinct == b.distinct, "sample_batch not deterministic");
  GNNIO_REQUIRE(a.hops.size() == hops + 1, "wrong hop count");
  std::set<NodeId> seed_set(seeds.begin(), seeds.end());
  GNNIO_REQUIRE(std::set<NodeId>(a.hops[0].begin(), a.hops[0].end()) == seed_set && a.hops[0].size() == seed_set.size(),
                "hop 0 is not the deduplicated seed set");
  for (std::size_t h = 1; h <= hops; ++h) {
    GNNIO_REQUIRE(a.hops[h].size() <= a.hops[h - 1].size() * cfg.fanouts[h - 1], "frontier exceeds fanout bound");
    for (NodeId v : a.hops[h]) {
      bool adjacent = std::any_of(a.hops[h - 1].begin(), a.hops[h - 1].end(), [&](NodeId u) {
        auto nb = g.neighbors(u);
        return std::binary_search(nb.begin(), nb.end(), v);
      });
      GNNIO_REQUIRE(adjacent, "sampled node is not a neighbor of the previous hop");
    }
  }
  std::set<NodeId> distinct(a.distinct.begin(), a.distinct.end());
  GNNIO_REQUIRE(distinct.size() == a.distinct.size(), "distinct list has duplicates");
  for (NodeId s : seed_set) GNNIO_REQUIRE(distinct.count(s), "seed missing from distinct list");

  BatchSchedule sched = random_shuffle_schedule(g, cfg.batch_size, rng());
  const PartId k = 1 + static_cast<PartId>(rng() % 4);
  Partitioning p = random_partition(g, k, rng());
  EpochResult x = simulate_epoch(g, p, sched, cfg);
  EpochResult y = simulate_epoch(g, p, sched, cfg);
  GNNIO_REQUIRE(x.trace.batches == y.trace.batches, "epoch trace not deterministic");
  GNNIO_REQUIRE(x.comm.local_accesses == y.comm.local_accesses && x.comm.remote_accesses == y.comm.remote_accesses &&
                    x.comm.request_load == y.comm.request_load,
                "epoch report not deterministic");
  GNNIO_REQUIRE(std::accumulate(x.comm.seed_load.begin(), x.comm.seed_load.end(), std::uint64_t{0}) == g.num_train(),
                "seed loads do not sum to |T|");
  GNNIO_REQUIRE(std::accumulate(x.comm.request_load.begin(), x.comm.request_load.end(), std::uint64_t{0}) ==
                    x.comm.total_lookups(),
                "request loads do not sum to lookups");
  for (std::size_t i = 0; i < sched.batches.size(); ++i) {
    const auto& t = x.trace.batches[i];
    std::set<NodeId> tset(t.begin(), t.end());
    GNNIO_REQUIRE(tset.size() == t.size(), "trace batch has duplicates");
    for (NodeId s : sched.batches[i]) GNNIO_REQUIRE(tset.count(s), "seed missing from trace batch");
  }
  if (k == 1) GNNIO_REQUIRE(x.comm.remote_accesses == 0, "remote accesses with one partition");
  return {};
}

#undef GNNIO_REQUIRE

}  // namespace gnnio::testing
