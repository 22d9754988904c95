#include "gnnio/partitioner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "gnnio/error.hpp"
#include "gnnio/random.hpp"
#include "gnnio/text_format.hpp"

namespace gnnio {

namespace {

constexpr BlockId kNoBlock = std::numeric_limits<BlockId>::max();
constexpr PartId kNoPart = std::numeric_limits<PartId>::max();

std::uint64_t pair_key(BlockId a, BlockId b) { return (static_cast<std::uint64_t>(a) << 32) | b; }

// Builds sorted, symmetric adjacency from (a, b, multiplicity) triples that
// were already emitted in both directions.
std::vector<std::vector<CoarseEdge>> adjacency_from_keys(BlockId num_blocks,
                                                         std::vector<std::pair<std::uint64_t, std::uint64_t>>& keyed) {
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::vector<CoarseEdge>> adj(num_blocks);
  for (std::size_t i = 0; i < keyed.size();) {
    std::size_t j = i;
    std::uint64_t mult = 0;
    while (j < keyed.size() && keyed[j].first == keyed[i].first) mult += keyed[j++].second;
    auto a = static_cast<BlockId>(keyed[i].first >> 32);
    auto b = static_cast<BlockId>(keyed[i].first & 0xffffffffu);
    adj[a].push_back({b, mult});
    i = j;
  }
  return adj;
}

}  // namespace

std::uint64_t CoarsenedGraph::total_size() const {
  return std::accumulate(block_size.begin(), block_size.end(), std::uint64_t{0});
}

std::uint64_t CoarsenedGraph::total_train() const {
  return std::accumulate(block_train_count.begin(), block_train_count.end(), std::uint64_t{0});
}

std::uint64_t CoarsenedGraph::num_coarse_edges() const {
  std::uint64_t entries = 0;
  for (const auto& list : adjacency) entries += list.size();
  return entries / 2;
}

// ---------------------------------------------------------------------------
// Block generation

BlockAssignment generate_blocks_from(const Graph& g, std::uint64_t block_size_threshold,
                                     std::span<const NodeId> sources, std::uint64_t seed) {
  if (block_size_threshold < 1) throw Error("block_size_threshold must be >= 1");
  const NodeId n = g.num_nodes();
  BlockAssignment out;
  out.block_of.assign(n, kNoBlock);

  std::vector<std::vector<NodeId>> queue;  // per-block BFS queue, consumed from `head`
  std::vector<std::size_t> head;
  std::vector<BlockId> active;

  auto open_block = [&](NodeId source) {
    auto b = static_cast<BlockId>(queue.size());
    out.block_of[source] = b;
    queue.push_back({source});
    head.push_back(0);
    active.push_back(b);
  };
  auto growing = [&](BlockId b) {
    return queue[b].size() < block_size_threshold && head[b] < queue[b].size();
  };

  for (NodeId s : sources) {
    if (s >= n) throw Error("BFS source out of range");
    if (out.block_of[s] == kNoBlock) open_block(s);
  }

  // Fresh sources come from a seeded permutation; skipping visited entries
  // yields a uniform draw over the currently unvisited nodes.
  std::vector<NodeId> fresh(n);
  std::iota(fresh.begin(), fresh.end(), NodeId{0});
  Rng rng(mix_seed(seed, 0xb10c));
  std::shuffle(fresh.begin(), fresh.end(), rng);
  std::size_t cursor = 0;

  while (true) {
    while (!active.empty()) {
      std::size_t kept = 0;
      for (BlockId b : active) {
        if (growing(b)) {
          NodeId u = queue[b][head[b]++];
          for (NodeId w : g.neighbors(u)) {
            if (queue[b].size() >= block_size_threshold) break;
            if (out.block_of[w] == kNoBlock) {
              out.block_of[w] = b;
              queue[b].push_back(w);
            }
          }
        }
        if (growing(b)) active[kept++] = b;
      }
      active.resize(kept);
    }
    while (cursor < n && out.block_of[fresh[cursor]] != kNoBlock) ++cursor;
    if (cursor == n) break;
    open_block(fresh[cursor]);
  }

  out.num_blocks = static_cast<BlockId>(queue.size());
  out.merged.assign(out.num_blocks, 0);
  return out;
}

BlockAssignment generate_blocks(const Graph& g, std::uint64_t block_size_threshold,
                                std::uint64_t num_sources, std::uint64_t seed) {
  if (num_sources < 1) throw Error("num_sources must be >= 1");
  const NodeId n = g.num_nodes();
  const auto count = static_cast<NodeId>(std::min<std::uint64_t>(num_sources, n));
  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), NodeId{0});
  Rng rng(mix_seed(seed, 0x5eed));
  for (NodeId i = 0; i < count; ++i) {
    std::swap(ids[i], ids[i + static_cast<NodeId>(uniform_below(rng, n - i))]);
  }
  ids.resize(count);
  return generate_blocks_from(g, block_size_threshold, ids, seed);
}

// ---------------------------------------------------------------------------
// Coarsening

CoarsenedGraph coarsen(const Graph& g, const BlockAssignment& blocks) {
  if (blocks.block_of.size() != g.num_nodes()) throw Error("block assignment does not cover the graph");
  CoarsenedGraph cg;
  cg.num_blocks = blocks.num_blocks;
  cg.block_size.assign(cg.num_blocks, 0);
  cg.block_train_count.assign(cg.num_blocks, 0);
  cg.merged = blocks.merged;
  cg.merged.resize(cg.num_blocks, 0);

  // Each connected node pair {u, v} crossing blocks counts once, in both
  // directions, whether the input stores one or both adjacency entries.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> keyed;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    const BlockId a = blocks.block_of[u];
    if (a >= cg.num_blocks) throw Error("block ID out of range");
    ++cg.block_size[a];
    if (g.is_train(u)) ++cg.block_train_count[a];
    for (NodeId v : g.neighbors(u)) {
      const BlockId b = blocks.block_of[v];
      if (a == b) continue;
      if (u > v) {
        auto back = g.neighbors(v);
        if (std::binary_search(back.begin(), back.end(), u)) continue;
      }
      keyed.emplace_back(pair_key(a, b), 1);
      keyed.emplace_back(pair_key(b, a), 1);
    }
  }
  cg.adjacency = adjacency_from_keys(cg.num_blocks, keyed);
  return cg;
}

MergeResult merge_small_blocks(const CoarsenedGraph& cg, double large_percentile, std::uint64_t seed) {
  if (!(large_percentile > 0.0 && large_percentile < 1.0)) {
    throw Error("large_percentile must be in (0, 1)");
  }
  const BlockId count = cg.num_blocks;
  MergeResult result;
  result.remap.resize(count);
  std::iota(result.remap.begin(), result.remap.end(), BlockId{0});
  if (count < 2) {
    result.graph = cg;
    return result;
  }

  std::vector<BlockId> by_size(count);
  std::iota(by_size.begin(), by_size.end(), BlockId{0});
  std::stable_sort(by_size.begin(), by_size.end(),
                   [&](BlockId a, BlockId b) { return cg.block_size[a] > cg.block_size[b]; });
  const auto num_large = std::max<BlockId>(
      1, static_cast<BlockId>(std::ceil(large_percentile * static_cast<double>(count))));
  std::vector<std::uint8_t> large(count, 0);
  for (BlockId i = 0; i < num_large; ++i) large[by_size[i]] = 1;
  const std::uint64_t target = cg.block_size[by_size[num_large - 1]];

  // Representative of each block's merged unit.
  std::vector<BlockId> rep(count);
  std::iota(rep.begin(), rep.end(), BlockId{0});
  std::vector<std::uint8_t> grouped(count, 0);
  std::vector<BlockId> isolated_small;

  Rng rng(mix_seed(seed, 0x3e7));
  // Equal-sized large neighbors: most crossing edges, then a seeded key.
  std::vector<std::uint64_t> key(count);
  for (auto& x : key) x = rng();
  for (BlockId b = 0; b < count; ++b) {
    if (large[b]) continue;
    BlockId best = kNoBlock;
    std::uint64_t best_mult = 0;
    for (const auto& e : cg.adjacency[b]) {
      if (!large[e.block]) continue;
      const bool better =
          best == kNoBlock || cg.block_size[e.block] > cg.block_size[best] ||
          (cg.block_size[e.block] == cg.block_size[best] &&
           (e.multiplicity > best_mult || (e.multiplicity == best_mult && key[e.block] < key[best])));
      if (better) {
        best = e.block;
        best_mult = e.multiplicity;
      }
    }
    if (best != kNoBlock) {
      rep[b] = best;
    } else {
      isolated_small.push_back(b);
    }
  }

  std::shuffle(isolated_small.begin(), isolated_small.end(), rng);
  for (std::size_t i = 0; i < isolated_small.size();) {
    const BlockId leader = isolated_small[i];
    std::uint64_t size = cg.block_size[leader];
    std::size_t j = i + 1;
    while (size < target && j < isolated_small.size()) {
      rep[isolated_small[j]] = leader;
      size += cg.block_size[isolated_small[j]];
      ++j;
    }
    if (j - i > 1) {
      for (std::size_t t = i; t < j; ++t) grouped[isolated_small[t]] = 1;
    }
    i = j;
  }

  // Dense output IDs in order of first appearance by input block ID.
  std::vector<BlockId> new_id(count, kNoBlock);
  BlockId next = 0;
  for (BlockId b = 0; b < count; ++b) {
    BlockId r = rep[b];
    if (new_id[r] == kNoBlock) new_id[r] = next++;
    result.remap[b] = new_id[r];
  }

  auto& out = result.graph;
  out.num_blocks = next;
  out.block_size.assign(next, 0);
  out.block_train_count.assign(next, 0);
  out.merged.assign(next, 0);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> keyed;
  for (BlockId b = 0; b < count; ++b) {
    const BlockId nb = result.remap[b];
    out.block_size[nb] += cg.block_size[b];
    out.block_train_count[nb] += cg.block_train_count[b];
    if (grouped[b] || (b < cg.merged.size() && cg.merged[b])) out.merged[nb] = 1;
    for (const auto& e : cg.adjacency[b]) {
      const BlockId nc = result.remap[e.block];
      if (nb != nc) keyed.emplace_back(pair_key(nb, nc), e.multiplicity);
    }
  }
  out.adjacency = adjacency_from_keys(next, keyed);
  return result;
}

// ---------------------------------------------------------------------------
// Assignment

std::vector<PartId> assign_blocks(const CoarsenedGraph& cg, PartId k, std::uint32_t hops,
                                  std::uint64_t seed, const AssignOptions& options,
                                  AssignStats* stats) {
  if (k < 1) throw Error("k must be >= 1");
  if (hops < 1) throw Error("hop count must be >= 1");
  if (k > cg.num_blocks) throw Error("more partitions than blocks");

  const BlockId count = cg.num_blocks;
  const double capacity = static_cast<double>(cg.total_size()) / k;
  const double train_capacity = static_cast<double>(cg.total_train()) / k;
  const double max_size = static_cast<double>(*std::max_element(cg.block_size.begin(), cg.block_size.end()));
  const double max_train =
      static_cast<double>(*std::max_element(cg.block_train_count.begin(), cg.block_train_count.end()));

  // Descending size; equal sizes in seeded random order.
  std::vector<BlockId> order(count);
  std::iota(order.begin(), order.end(), BlockId{0});
  Rng rng(mix_seed(seed, 0xa55));
  std::shuffle(order.begin(), order.end(), rng);
  std::stable_sort(order.begin(), order.end(),
                   [&](BlockId a, BlockId b) { return cg.block_size[a] > cg.block_size[b]; });

  std::vector<PartId> part(count, kNoPart);
  std::vector<double> load(k, 0.0), train_load(k, 0.0), weight(k, 0.0);
  std::vector<std::uint32_t> seen(count, 0);
  std::uint32_t stamp = 0;
  std::vector<BlockId> frontier, next;
  std::uint64_t visits = 0;

  auto node_factor = [&](PartId i) {
    return capacity > 0.0 ? std::max(0.0, 1.0 - load[i] / capacity) : 1.0;
  };
  auto train_factor = [&](PartId i) {
    if (!options.train_penalty || train_capacity <= 0.0) return 1.0;
    return std::max(0.0, 1.0 - train_load[i] / train_capacity);
  };
  // Fuller of the two capacities after adding `block`.
  auto fill_after = [&](PartId i, BlockId block) {
    double v = capacity > 0.0 ? (load[i] + static_cast<double>(cg.block_size[block])) / capacity : 0.0;
    if (options.train_penalty && train_capacity > 0.0) {
      v = std::max(v, (train_load[i] + static_cast<double>(cg.block_train_count[block])) / train_capacity);
    }
    return v;
  };
  auto node_open = [&](PartId i) { return !(capacity > 0.0 && load[i] >= capacity); };
  auto train_open = [&](PartId i) {
    return !(options.train_penalty && train_capacity > 0.0 && train_load[i] >= train_capacity);
  };

  for (BlockId block : order) {
    std::fill(weight.begin(), weight.end(), 0.0);
    ++stamp;
    seen[block] = stamp;
    frontier.assign(1, block);
    for (std::uint32_t depth = 1; depth <= hops && !frontier.empty(); ++depth) {
      const double multiplier = static_cast<double>(hops - depth + 1);
      next.clear();
      for (BlockId x : frontier) {
        for (const auto& e : cg.adjacency[x]) {
          ++visits;
          if (seen[e.block] == stamp) continue;
          seen[e.block] = stamp;
          next.push_back(e.block);
          if (part[e.block] != kNoPart) {
            weight[part[e.block]] += multiplier * static_cast<double>(cg.block_size[e.block]);
          }
        }
      }
      frontier.swap(next);
    }

    PartId best = kNoPart;
    double best_score = 0.0;
    for (PartId i = 0; i < k; ++i) {
      const double score = weight[i] * node_factor(i) * train_factor(i);
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    if (best == kNoPart) {
      // Least combined load, preferring partitions with room for this block:
      // below both capacities, then within the overshoot of one maximal
      // block on both counts, then on nodes only, then anywhere.
      const bool has_train = cg.block_train_count[block] > 0;
      const double size = static_cast<double>(cg.block_size[block]);
      const double train = static_cast<double>(cg.block_train_count[block]);
      auto tier = [&](PartId i) {
        const bool nodes_fit = load[i] + size <= capacity + max_size;
        const bool train_fits = !options.train_penalty || train_load[i] + train <= train_capacity + max_train;
        if (node_open(i) && (!has_train || train_open(i))) return 0;
        if (nodes_fit && train_fits) return 1;
        return nodes_fit ? 2 : 3;
      };
      int best_tier = 4;
      double least = std::numeric_limits<double>::infinity();
      for (PartId i = 0; i < k; ++i) {
        const int t = tier(i);
        const double v = fill_after(i, block);
        if (t < best_tier || (t == best_tier && v < least)) {
          best_tier = t;
          least = v;
          best = i;
        }
      }
    }
    part[block] = best;
    load[best] += static_cast<double>(cg.block_size[block]);
    train_load[best] += static_cast<double>(cg.block_train_count[block]);
  }

  if (stats) stats->adjacency_visits = visits;
  return part;
}

// ---------------------------------------------------------------------------

Partitioning make_partitioning(const Graph& g, std::vector<PartId> part_of, PartId k) {
  if (k < 1) throw Error("k must be >= 1");
  if (part_of.size() != g.num_nodes()) throw Error("partitioning does not cover the graph");
  Partitioning p;
  p.k = k;
  p.part_size.assign(k, 0);
  p.part_train.assign(k, 0);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (part_of[v] >= k) throw Error("partition ID out of range at node " + std::to_string(v));
    ++p.part_size[part_of[v]];
    if (g.is_train(v)) ++p.part_train[part_of[v]];
  }
  p.part_of = std::move(part_of);
  return p;
}

Partitioning uncoarsen(const Graph& g, const BlockAssignment& blocks, std::span<const BlockId> remap,
                       std::span<const PartId> block_parts, PartId k) {
  std::vector<PartId> part_of(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    BlockId b = blocks.block_of[v];
    if (!remap.empty()) b = remap[b];
    if (b >= block_parts.size()) throw Error("block without a partition");
    part_of[v] = block_parts[b];
  }
  return make_partitioning(g, std::move(part_of), k);
}

Partitioning multilevel_partition(const Graph& g, const MultilevelParams& params, MultilevelTrace* trace) {
  if (params.block_size_threshold < 1) throw Error("block_size_threshold must be >= 1");
  const std::uint64_t sources = params.num_sources
                                    ? params.num_sources
                                    : (g.num_nodes() + params.block_size_threshold - 1) / params.block_size_threshold;
  auto blocks = generate_blocks(g, params.block_size_threshold, std::max<std::uint64_t>(sources, 1),
                                mix_seed(params.seed, 1));
  if (blocks.num_blocks < params.k) {
    // Graph smaller than k blocks at this threshold: fall back to singletons.
    blocks = generate_blocks(g, 1, g.num_nodes(), mix_seed(params.seed, 1));
  }
  auto cg = coarsen(g, blocks);
  auto merged = merge_small_blocks(cg, params.large_percentile, mix_seed(params.seed, 2));
  if (merged.graph.num_blocks < params.k) {
    // Too coarse for k partitions: assign the BFS-level blocks directly.
    merged.graph = cg;
    std::iota(merged.remap.begin(), merged.remap.end(), BlockId{0});
  }
  AssignStats stats;
  auto parts = assign_blocks(merged.graph, params.k, params.hops, mix_seed(params.seed, 3), {}, &stats);
  if (trace) {
    trace->bfs_blocks = blocks.num_blocks;
    trace->merged_blocks = merged.graph.num_blocks;
    trace->coarse_edges = merged.graph.num_coarse_edges();
    trace->assign = stats;
  }
  return uncoarsen(g, blocks, merged.remap, parts, params.k);
}

Partitioning random_partition(const Graph& g, PartId k, std::uint64_t seed) {
  if (k < 1) throw Error("k must be >= 1");
  Rng rng(mix_seed(seed, 0x4a7d));
  std::vector<PartId> part_of(g.num_nodes());
  for (auto& p : part_of) p = static_cast<PartId>(uniform_below(rng, k));
  return make_partitioning(g, std::move(part_of), k);
}

Partitioning one_hop_greedy_partition(const Graph& g, PartId k, std::uint64_t seed) {
  BlockAssignment identity;
  identity.num_blocks = g.num_nodes();
  identity.block_of.resize(g.num_nodes());
  std::iota(identity.block_of.begin(), identity.block_of.end(), BlockId{0});
  identity.merged.assign(g.num_nodes(), 0);
  auto cg = coarsen(g, identity);
  auto parts = assign_blocks(cg, k, 1, seed, AssignOptions{.train_penalty = false});
  return uncoarsen(g, identity, {}, parts, k);
}

PartitionQuality partition_quality(const Graph& g, const Partitioning& p, std::uint64_t sample_size,
                                   std::uint64_t seed) {
  PartitionQuality q;
  const NodeId n = g.num_nodes();
  std::uint64_t cut = 0;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : g.neighbors(u)) cut += p.part_of[u] != p.part_of[v];
  }
  q.edge_cut_fraction = g.num_edges() ? static_cast<double>(cut) / static_cast<double>(g.num_edges()) : 0.0;

  const double capacity = static_cast<double>(n) / p.k;
  const double train_capacity = static_cast<double>(g.num_train()) / p.k;
  q.node_balance = capacity > 0.0
                       ? static_cast<double>(*std::max_element(p.part_size.begin(), p.part_size.end())) / capacity
                       : 1.0;
  q.train_balance = train_capacity > 0.0
                        ? static_cast<double>(*std::max_element(p.part_train.begin(), p.part_train.end())) /
                              train_capacity
                        : 1.0;

  std::vector<NodeId> starts;
  for (NodeId v = 0; v < n; ++v) {
    if (g.degree(v) > 0) starts.push_back(v);
  }
  Rng rng(mix_seed(seed, 0x2409));
  std::uint64_t walks = 0, together = 0;
  const std::uint64_t attempts = 20 * sample_size;
  for (std::uint64_t t = 0; t < attempts && walks < sample_size && !starts.empty(); ++t) {
    NodeId u = starts[uniform_below(rng, starts.size())];
    auto first = g.neighbors(u);
    NodeId v = first[uniform_below(rng, first.size())];
    auto second = g.neighbors(v);
    if (second.empty()) continue;
    NodeId w = second[uniform_below(rng, second.size())];
    if (w == u) continue;
    ++walks;
    together += p.part_of[u] == p.part_of[w];
  }
  q.two_hop_locality = walks ? static_cast<double>(together) / static_cast<double>(walks) : 1.0;
  return q;
}

void save_partitioning(const Partitioning& p, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "# k " << p.k << '\n';
  for (std::size_t v = 0; v < p.part_of.size(); ++v) out << v << ' ' << p.part_of[v] << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

Partitioning load_partitioning(const Graph& g, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<PartId> part_of(g.num_nodes(), kNoPart);
  PartId k = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto view = trim(line);
    if (view.empty()) continue;
    auto tokens = split_whitespace(view);
    if (view.front() == '#') {
      if (tokens.size() == 3 && tokens[1] == "k") k = static_cast<PartId>(std::stoul(std::string(tokens[2])));
      continue;
    }
    unsigned long long node = 0, part = 0;
    try {
      if (tokens.size() != 2) throw std::invalid_argument("columns");
      node = std::stoull(std::string(tokens[0]));
      part = std::stoull(std::string(tokens[1]));
    } catch (const std::exception&) {
      throw ParseError(path.string(), line_no, "expected \"node_id partition_id\"");
    }
    if (node >= g.num_nodes()) throw ParseError(path.string(), line_no, "node_id out of range");
    part_of[node] = static_cast<PartId>(part);
    k = std::max<PartId>(k, static_cast<PartId>(part + 1));
  }
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (part_of[v] == kNoPart) throw Error("partitioning file misses node " + std::to_string(v));
  }
  return make_partitioning(g, std::move(part_of), k);
}

void write_quality_csv_header(std::ostream& out) {
  out << "method,k,edge_cut_fraction,node_balance,train_balance,two_hop_locality\n";
}

void write_quality_csv_row(std::ostream& out, const std::string& method, PartId k, const PartitionQuality& q) {
  out << method << ',' << k << ',' << format_number(q.edge_cut_fraction) << ',' << format_number(q.node_balance)
      << ',' << format_number(q.train_balance) << ',' << format_number(q.two_hop_locality) << '\n';
}

}  // namespace gnnio
