#include "gnnio/sampler.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>

#include "gnnio/error.hpp"
#include "gnnio/random.hpp"
#include "gnnio/text_format.hpp"

namespace gnnio {

void SamplingConfig::validate() const {
  if (fanouts.empty()) throw Error("sampling needs at least one hop");
  for (auto f : fanouts) {
    if (f == 0) throw Error("fanouts must be positive");
  }
}

std::uint64_t AccessTrace::total_accesses() const {
  std::uint64_t total = 0;
  for (const auto& b : batches) total += b.size();
  return total;
}

double EpochCommReport::remote_fraction() const {
  auto total = total_lookups();
  return total ? static_cast<double>(remote_accesses) / static_cast<double>(total) : 0.0;
}

std::uint64_t batch_seed(const SamplingConfig& cfg, std::uint64_t index) { return mix_seed(cfg.seed, index); }

namespace {

constexpr std::uint32_t kNoOrigin = 0xffffffffu;

// Reusable per-graph scratch; stamps avoid clearing O(n) arrays per batch.
class NeighborSampler {
 public:
  explicit NeighborSampler(const Graph& g) : g_(g), hop_mark_(g.num_nodes(), 0), seen_mark_(g.num_nodes(), 0) {}

  // `origin_of_seed` may be empty. `on_lookup(node, origin)` fires once per
  // adjacency lookup.
  template <typename OnLookup>
  SampledBatch run(std::span<const NodeId> seeds, std::span<const std::uint32_t> origin_of_seed,
                   const SamplingConfig& cfg, std::uint64_t seed, OnLookup&& on_lookup) {
    Rng rng(seed);
    SampledBatch out;
    out.hops.resize(cfg.fanouts.size() + 1);
    std::vector<std::uint32_t> origins, next_origins;

    auto& hop0 = out.hops[0];
    ++stamp_;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      NodeId s = seeds[i];
      if (s >= g_.num_nodes()) throw Error("seed out of range");
      if (hop_mark_[s] == stamp_) continue;
      hop_mark_[s] = stamp_;
      hop0.push_back(s);
      origins.push_back(origin_of_seed.empty() ? kNoOrigin : origin_of_seed[i]);
    }

    std::vector<std::uint32_t> picked;
    for (std::size_t h = 1; h <= cfg.fanouts.size(); ++h) {
      const std::uint32_t fanout = cfg.fanouts[h - 1];
      const auto& frontier = out.hops[h - 1];
      auto& next = out.hops[h];
      next_origins.clear();
      ++stamp_;
      for (std::size_t i = 0; i < frontier.size(); ++i) {
        const NodeId u = frontier[i];
        on_lookup(u, origins[i]);
        auto nbrs = g_.neighbors(u);
        const auto deg = static_cast<std::uint32_t>(nbrs.size());
        auto visit = [&](NodeId w) {
          if (hop_mark_[w] == stamp_) return;
          hop_mark_[w] = stamp_;
          next.push_back(w);
          next_origins.push_back(origins[i]);
        };
        if (fanout >= deg) {
          for (NodeId w : nbrs) visit(w);
          continue;
        }
        // Floyd's sampling of `fanout` distinct indices out of `deg`.
        picked.clear();
        for (std::uint32_t j = deg - fanout; j < deg; ++j) {
          auto t = static_cast<std::uint32_t>(uniform_below(rng, std::uint64_t{j} + 1));
          if (std::find(picked.begin(), picked.end(), t) != picked.end()) t = j;
          picked.push_back(t);
        }
        for (auto idx : picked) visit(nbrs[idx]);
      }
      origins.swap(next_origins);
    }

    ++stamp_;
    for (const auto& hop : out.hops) {
      for (NodeId v : hop) {
        if (seen_mark_[v] == stamp_) continue;
        seen_mark_[v] = stamp_;
        out.distinct.push_back(v);
      }
    }
    return out;
  }

 private:
  const Graph& g_;
  std::vector<std::uint64_t> hop_mark_;
  std::vector<std::uint64_t> seen_mark_;
  std::uint64_t stamp_ = 0;
};

}  // namespace

SampledBatch sample_batch(const Graph& g, std::span<const NodeId> seeds, const SamplingConfig& cfg,
                          std::uint64_t seed) {
  cfg.validate();
  if (seeds.empty()) throw Error("sample_batch needs at least one seed");
  NeighborSampler sampler(g);
  return sampler.run(seeds, {}, cfg, seed, [](NodeId, std::uint32_t) {});
}

EpochResult simulate_epoch(const Graph& g, const Partitioning& p, const BatchSchedule& schedule,
                           const SamplingConfig& cfg) {
  cfg.validate();
  if (p.part_of.size() != g.num_nodes()) throw Error("partitioning does not cover the graph");
  EpochResult result;
  auto& comm = result.comm;
  comm.seed_load.assign(p.k, 0);
  comm.request_load.assign(p.k, 0);

  NeighborSampler sampler(g);
  std::vector<std::uint32_t> origins;
  for (std::size_t b = 0; b < schedule.batches.size(); ++b) {
    const auto& seeds = schedule.batches[b];
    if (seeds.empty()) {
      result.trace.batches.emplace_back();
      continue;
    }
    origins.clear();
    for (NodeId s : seeds) {
      if (s >= g.num_nodes()) throw Error("seed out of range");
      origins.push_back(p.part_of[s]);
      ++comm.seed_load[p.part_of[s]];
    }
    auto sampled = sampler.run(seeds, origins, cfg, batch_seed(cfg, b), [&](NodeId v, std::uint32_t origin) {
      const PartId home = p.part_of[v];
      ++comm.request_load[home];
      if (home == origin) {
        ++comm.local_accesses;
      } else {
        ++comm.remote_accesses;
      }
    });
    result.trace.batches.push_back(std::move(sampled.distinct));
  }
  return result;
}

AccessTrace sample_trace(const Graph& g, const BatchSchedule& schedule, const SamplingConfig& cfg) {
  cfg.validate();
  AccessTrace trace;
  NeighborSampler sampler(g);
  for (std::size_t b = 0; b < schedule.batches.size(); ++b) {
    const auto& seeds = schedule.batches[b];
    if (seeds.empty()) {
      trace.batches.emplace_back();
      continue;
    }
    auto sampled = sampler.run(seeds, {}, cfg, batch_seed(cfg, b), [](NodeId, std::uint32_t) {});
    trace.batches.push_back(std::move(sampled.distinct));
  }
  return trace;
}

void save_trace(const AccessTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& batch : trace.batches) {
    for (std::size_t i = 0; i < batch.size(); ++i) out << (i ? " " : "") << batch[i];
    out << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

AccessTrace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  AccessTrace trace;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto view = trim(line);
    if (!view.empty() && view.front() == '#') continue;
    std::vector<NodeId> batch;
    for (auto t : split_whitespace(view)) {
      NodeId v = 0;
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw ParseError(path.string(), line_no, "bad node ID \"" + std::string(t) + "\"");
      }
      batch.push_back(v);
    }
    trace.batches.push_back(std::move(batch));
  }
  return trace;
}

void write_comm_csv(std::ostream& out, const EpochCommReport& report) {
  CsvWriter csv(out, {"local_accesses", "remote_accesses", "total_lookups", "remote_fraction",
                      "bytes_remote_features"});
  csv.cell(report.local_accesses)
      .cell(report.remote_accesses)
      .cell(report.total_lookups())
      .cell(report.remote_fraction())
      .cell(report.bytes_remote_features)
      .end_row();
}

void write_partition_load_csv(std::ostream& out, const EpochCommReport& report) {
  CsvWriter csv(out, {"partition", "seed_load", "request_load"});
  for (std::size_t i = 0; i < report.seed_load.size(); ++i) {
    csv.cell(static_cast<unsigned long long>(i)).cell(report.seed_load[i]).cell(report.request_load[i]).end_row();
  }
}

}  // namespace gnnio
