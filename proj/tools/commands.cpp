#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "experiments.hpp"
#include "gnnio/allocator.hpp"
#include "gnnio/cache_sim.hpp"
#include "gnnio/error.hpp"
#include "gnnio/ordering.hpp"
#include "gnnio/partitioner.hpp"
#include "gnnio/random.hpp"
#include "gnnio/sampler.hpp"
#include "gnnio/text_format.hpp"

namespace gnnio::cli {

namespace fs = std::filesystem;

namespace {

const char* const kMethods[] = {"random", "one_hop", "multilevel"};

std::string partition_all_key(const ExperimentConfig& cfg) {
  return cfg.partition_key("all") + "partition.selected=" + cfg.partition.method + '\n';
}

fs::path keyed(const Context& ctx, const std::string& prefix, const std::string& key, const char* ext) {
  return ctx.out / (prefix + "-" + config_hash(key) + ext);
}

void require(const fs::path& path, const char* command) {
  if (!fs::exists(path)) {
    throw Error("missing " + path.filename().string() + ": run " + command + " first");
  }
}

std::ofstream open_out(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void note(const Context& ctx, const std::string& text) {
  if (ctx.log) *ctx.log << text << '\n';
}

Graph load_graph(const Context& ctx) {
  require(graph_path(ctx), "gen");
  require(meta_path(ctx), "gen");
  Graph g = load_edge_list(graph_path(ctx));
  load_metadata(g, meta_path(ctx));
  return g;
}

Partitioning build_partition(const Graph& g, const ExperimentConfig& cfg, const std::string& method) {
  if (method == "random") return random_partition(g, cfg.partition.k, cfg.seed);
  if (method == "one_hop") return one_hop_greedy_partition(g, cfg.partition.k, cfg.seed);
  MultilevelParams mp;
  mp.k = cfg.partition.k;
  mp.hops = cfg.partition.hops;
  mp.block_size_threshold = cfg.partition.threshold;
  mp.large_percentile = cfg.partition.percentile;
  mp.seed = cfg.seed;
  return multilevel_partition(g, mp);
}

SamplingConfig sampling_config(const ExperimentConfig& cfg) {
  SamplingConfig s;
  s.fanouts = cfg.sample.fanouts;
  s.batch_size = cfg.order.batch_size;
  s.seed = mix_seed(cfg.seed, 0x5a);
  return s;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name, const fs::path& source) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(source.string() + ": missing column " + name);
    return static_cast<std::size_t>(it - header.begin());
  }
};

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  CsvTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (t.header.empty()) {
      t.header = std::move(cells);
    } else {
      if (cells.size() != t.header.size()) throw Error(path.string() + ": ragged row");
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

}  // namespace

fs::path graph_path(const Context& ctx) { return keyed(ctx, "graph", ctx.cfg.graph_key(), ".edges"); }
fs::path meta_path(const Context& ctx) { return keyed(ctx, "graph", ctx.cfg.graph_key(), ".meta"); }
fs::path partition_path(const Context& ctx, const std::string& method) {
  return keyed(ctx, "partition", ctx.cfg.partition_key(method), ".txt");
}
fs::path schedule_path(const Context& ctx) { return keyed(ctx, "schedule", ctx.cfg.order_key(), ".txt"); }
fs::path trace_path(const Context& ctx) { return keyed(ctx, "trace", ctx.cfg.sample_key(), ".txt"); }

fs::path metrics_path(const Context& ctx, const std::string& name) {
  const auto& cfg = ctx.cfg;
  std::string key;
  if (name == "gen") key = cfg.graph_key();
  else if (name == "partition_quality") key = partition_all_key(cfg);
  else if (name == "order" || name == "order_epsilon") key = cfg.order_key();
  else if (name == "sample_comm" || name == "sample_load") key = cfg.sample_key() + partition_all_key(cfg);
  else if (name == "cache_sweep" || name == "cache_batches") key = cfg.cache_key();
  else if (name == "report_cache_hits" || name == "report_partitions") key = cfg.cache_key() + partition_all_key(cfg);
  else throw Error("unknown metrics file " + name);
  return keyed(ctx, name, key, ".csv");
}

void cmd_gen(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  cfg.validate();
  Graph g;
  if (!cfg.graph.file.empty()) {
    g = load_edge_list(cfg.graph.file, LoadOptions{.undirected = true, .compact_ids = cfg.graph.compact_ids});
    if (!cfg.graph.meta_file.empty()) {
      load_metadata(g, cfg.graph.meta_file);
    } else {
      g.set_train_mask(sample_train_mask(g.num_nodes(), cfg.graph.train_fraction, cfg.seed));
      g.set_feature_dim(cfg.graph.feature_dim);
    }
  } else {
    PowerLawOptions o;
    o.num_communities = cfg.graph.communities;
    o.intra_fraction = cfg.graph.intra_fraction;
    o.locality_span = cfg.graph.locality_span;
    o.label_noise = cfg.graph.label_noise;
    o.feature_dim = cfg.graph.feature_dim;
    g = generate_power_law(cfg.graph.n, cfg.graph.avg_degree, cfg.seed, cfg.graph.train_fraction,
                           cfg.graph.num_labels, o);
  }
  fs::create_directories(ctx.out);
  save_edge_list(g, graph_path(ctx));
  save_metadata(g, meta_path(ctx));

  const auto stats = graph_stats(g);
  std::uint32_t max_degree = stats.degree_histogram.empty() ? 0 : stats.degree_histogram.rbegin()->first;
  auto out = open_out(metrics_path(ctx, "gen"));
  CsvWriter csv(out, {"num_nodes", "num_edges", "num_train", "num_components", "max_degree"});
  csv.cell(g.num_nodes()).cell(g.num_edges()).cell(stats.num_train).cell(stats.num_components).cell(max_degree);
  csv.end_row();
  note(ctx, "graph: " + graph_path(ctx).string());
}

void cmd_partition(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  cfg.validate();
  const Graph g = load_graph(ctx);
  auto out = open_out(metrics_path(ctx, "partition_quality"));
  write_quality_csv_header(out);
  for (const char* method : kMethods) {
    const auto p = build_partition(g, cfg, method);
    save_partitioning(p, partition_path(ctx, method));
    write_quality_csv_row(out, method, p.k, partition_quality(g, p, cfg.partition.quality_samples, cfg.seed));
  }
  note(ctx, "partition: " + partition_path(ctx, cfg.partition.method).string());
}

void cmd_order(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  cfg.validate();
  const Graph g = load_graph(ctx);
  if (g.num_train() == 0) throw Error("graph has no training nodes");
  const std::uint32_t b = cfg.order.batch_size;

  BatchSchedule schedule;
  std::uint32_t sequences = 0;
  bool threshold_met = false;
  std::vector<double> epsilon_by_s;
  if (cfg.order.policy == "random") {
    schedule = random_shuffle_schedule(g, b, cfg.seed);
  } else if (cfg.order.num_sequences > 0) {
    sequences = cfg.order.num_sequences;
    if (sequences > g.num_train()) throw Error("order.num_sequences: exceeds the number of training nodes");
    schedule = proximity_schedule(g, sequences, b, mix_seed(cfg.seed, sequences));
  } else {
    if (!g.has_labels()) throw Error("order.num_sequences: must be set when the graph has no labels");
    auto sel = select_num_sequences(g, b, cfg.order.workers, cfg.order.max_sequences, cfg.seed);
    sequences = sel.num_sequences;
    threshold_met = sel.threshold_met;
    epsilon_by_s = sel.epsilon_by_s;
    schedule = proximity_schedule(g, sequences, b, mix_seed(cfg.seed, sequences));
  }
  save_schedule(schedule, schedule_path(ctx));

  ShufflingErrorReport report;
  if (g.has_labels()) report = shuffling_error(schedule, g.labels());
  auto out = open_out(metrics_path(ctx, "order"));
  CsvWriter csv(out, {"policy", "num_sequences", "num_batches", "epsilon", "max_tv", "threshold", "threshold_met"});
  csv.cell(schedule.policy).cell(sequences).cell(static_cast<unsigned long long>(schedule.batches.size()));
  csv.cell(report.epsilon).cell(report.max_tv).cell(shuffling_threshold(b, cfg.order.workers, g.num_train()));
  csv.cell(threshold_met ? 1 : 0).end_row();
  if (!epsilon_by_s.empty()) {
    auto eps = open_out(metrics_path(ctx, "order_epsilon"));
    CsvWriter e(eps, {"num_sequences", "epsilon"});
    for (std::size_t s = 0; s < epsilon_by_s.size(); ++s) {
      e.cell(static_cast<unsigned long long>(s + 1)).cell(epsilon_by_s[s]).end_row();
    }
  }
  if (cfg.order.policy == "proximity" && cfg.order.num_sequences == 0 && !threshold_met) {
    note(ctx, "warning: no S <= " + std::to_string(cfg.order.max_sequences) +
                  " met the shuffling-error threshold; using S = " + std::to_string(sequences));
  }
  note(ctx, "schedule: " + schedule_path(ctx).string());
}

void cmd_sample(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  cfg.validate();
  const Graph g = load_graph(ctx);
  require(schedule_path(ctx), "order");
  require(partition_path(ctx, cfg.partition.method), "partition");
  const auto schedule = load_schedule(schedule_path(ctx));
  const auto sampling = sampling_config(cfg);

  auto comm_out = open_out(metrics_path(ctx, "sample_comm"));
  CsvWriter comm(comm_out, {"method", "local_accesses", "remote_accesses", "total_lookups", "remote_fraction"});
  for (const char* method : kMethods) {
    const auto path = partition_path(ctx, method);
    if (!fs::exists(path)) continue;
    const auto p = load_partitioning(g, path);
    auto epoch = simulate_epoch(g, p, schedule, sampling);
    comm.cell(method)
        .cell(epoch.comm.local_accesses)
        .cell(epoch.comm.remote_accesses)
        .cell(epoch.comm.total_lookups())
        .cell(epoch.comm.remote_fraction())
        .end_row();
    if (method == cfg.partition.method) {
      save_trace(epoch.trace, trace_path(ctx));
      auto load_out = open_out(metrics_path(ctx, "sample_load"));
      write_partition_load_csv(load_out, epoch.comm);
    }
  }
  note(ctx, "trace: " + trace_path(ctx).string());
}

void cmd_cache(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  cfg.validate();
  const Graph g = load_graph(ctx);
  require(trace_path(ctx), "sample");
  const auto trace = load_trace(trace_path(ctx));
  if (trace.batches.empty()) throw Error("empty access trace");

  auto make = [&](CachePolicy policy, double fraction) {
    CacheConfig c;
    c.policy = policy;
    c.num_devices = cfg.cache.devices;
    c.device_capacity = static_cast<std::uint64_t>(fraction * g.num_nodes()) / cfg.cache.devices;
    c.host_capacity = static_cast<std::uint64_t>(cfg.cache.host_capacity * g.num_nodes());
    c.feature_bytes_per_node = g.feature_bytes_per_node();
    return c;
  };
  SimulateOptions options;
  options.graph = &g;

  std::vector<PolicyHitRow> rows;
  for (auto policy : cfg.cache.policies) {
    for (double fraction : cfg.cache.capacities) {
      const auto c = make(policy, fraction);
      rows.push_back({policy, c.device_capacity * c.num_devices, simulate(trace, c, options)});
    }
  }
  auto sweep = open_out(metrics_path(ctx, "cache_sweep"));
  write_sweep_csv(sweep, rows);

  const auto report = simulate(trace, make(cfg.cache.policy, cfg.cache.capacity), options);
  auto batches = open_out(metrics_path(ctx, "cache_batches"));
  write_cache_report_csv(batches, report);
  note(ctx, "cache sweep: " + metrics_path(ctx, "cache_sweep").string());
}

void cmd_allocate(const Context& ctx, const std::string& profile_override) {
  const auto& cfg = ctx.cfg;
  const std::string profile_file = profile_override.empty() ? cfg.allocate.profile : profile_override;
  if (profile_file.empty()) throw Error("allocate.profile: no profile file given");
  Capacities caps;
  const auto profile = load_profile(profile_file, &caps);
  if (cfg.allocate.c_gs) caps.c_gs = cfg.allocate.c_gs;
  if (cfg.allocate.c_wm) caps.c_wm = cfg.allocate.c_wm;
  if (cfg.allocate.b_pcie) caps.b_pcie = cfg.allocate.b_pcie;
  if (caps.c_gs < 2) throw Error("allocate.C_gs: must be >= 2");
  if (caps.c_wm < 2) throw Error("allocate.C_wm: must be >= 2");
  if (caps.b_pcie < 2) throw Error("allocate.B_pcie: must be >= 2");

  const auto model = fit_cache_cost(profile.cache_samples);
  const auto plan = solve_allocation(profile, model, caps);
  const auto eval = evaluate_plan(profile, model, plan);

  std::ifstream in(profile_file);
  std::stringstream text;
  text << in.rdbuf() << "C_gs=" << caps.c_gs << "\nC_wm=" << caps.c_wm << "\nB_pcie=" << caps.b_pcie << '\n';
  auto out = open_out(keyed(ctx, "allocation", text.str(), ".csv"));
  write_plan_csv(out, plan, eval);
  if (ctx.log) {
    *ctx.log << "a=" << format_number(model.a) << "\nd=" << format_number(model.d) << '\n';
    write_plan(*ctx.log, plan);
  }
}

void cmd_report(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  cfg.validate();
  const auto sweep_path = metrics_path(ctx, "cache_sweep");
  const auto quality_path = metrics_path(ctx, "partition_quality");
  const auto comm_path = metrics_path(ctx, "sample_comm");
  require(quality_path, "partition");
  require(comm_path, "sample");
  require(sweep_path, "cache");
  require(meta_path(ctx), "gen");

  const auto sweep = read_csv(sweep_path);
  const auto policy_col = sweep.column("policy", sweep_path);
  const auto capacity_col = sweep.column("capacity", sweep_path);
  const auto hit_col = sweep.column("hit_ratio", sweep_path);
  const auto remote_col = sweep.column("remote_bytes", sweep_path);
  const double n = static_cast<double>(load_graph(ctx).num_nodes());

  auto hits = open_out(metrics_path(ctx, "report_cache_hits"));
  CsvWriter f(hits, {"policy", "capacity", "capacity_fraction", "hit_ratio", "remote_bytes"});
  for (const auto& row : sweep.rows) {
    const double capacity = std::stod(row[capacity_col]);
    f.cell(row[policy_col]).cell(row[capacity_col]).cell(n > 0 ? capacity / n : 0.0);
    f.cell(row[hit_col]).cell(row[remote_col]).end_row();
  }

  const auto quality = read_csv(quality_path);
  const auto comm = read_csv(comm_path);
  std::map<std::string, std::vector<std::string>> comm_by_method;
  const auto comm_method = comm.column("method", comm_path);
  for (const auto& row : comm.rows) comm_by_method[row[comm_method]] = row;

  auto table = open_out(metrics_path(ctx, "report_partitions"));
  CsvWriter t(table, {"method", "k", "edge_cut_fraction", "node_balance", "train_balance", "two_hop_locality",
                      "remote_accesses", "remote_fraction"});
  const auto q_method = quality.column("method", quality_path);
  for (const auto& row : quality.rows) {
    auto it = comm_by_method.find(row[q_method]);
    if (it == comm_by_method.end()) throw Error("no sampling result for " + row[q_method] + ": run sample first");
    for (const char* col : {"method", "k", "edge_cut_fraction", "node_balance", "train_balance", "two_hop_locality"}) {
      t.cell(row[quality.column(col, quality_path)]);
    }
    t.cell(it->second[comm.column("remote_accesses", comm_path)]);
    t.cell(it->second[comm.column("remote_fraction", comm_path)]);
    t.end_row();
  }
  note(ctx, "report: " + metrics_path(ctx, "report_cache_hits").string());
  note(ctx, "report: " + metrics_path(ctx, "report_partitions").string());
}

int cmd_repro(const Context& ctx, bool quick) {
  namespace ex = gnnio::experiments;
  ex::PlantedGraphParams params;
  if (quick) params.n = 20000;
  const std::uint64_t seeds[] = {1, 2, 3};
  const std::uint64_t eps_seeds[] = {1, 2, 3, 4, 5};
  int failures = 0;
  auto check = [&](const std::string& name, bool ok, const std::string& detail) {
    if (!ok) ++failures;
    note(ctx, std::string(ok ? "PASS " : "FAIL ") + name + ": " + detail);
  };
  fs::create_directories(ctx.out);

  std::vector<ex::CacheTrend> cache_rows;
  for (auto s : seeds) cache_rows.push_back(ex::cache_trend(params, s));
  {
    auto out = open_out(ctx.out / "repro_cache_trend.csv");
    ex::write_cache_trend_csv(out, cache_rows);
  }
  for (const auto& r : cache_rows) {
    check("cache trend seed " + std::to_string(r.seed),
          r.fifo_proximity >= r.static_proximity + 0.05 && r.fifo_proximity >= r.fifo_random + 0.10,
          "fifo+proximity " + format_number(r.fifo_proximity) + ", static " + format_number(r.static_proximity) +
              ", fifo+random " + format_number(r.fifo_random));
  }

  std::vector<ex::PartitionTrend> part_rows;
  for (auto s : seeds) part_rows.push_back(ex::partition_trend(params, s));
  {
    auto out = open_out(ctx.out / "repro_partition_trend.csv");
    ex::write_partition_trend_csv(out, part_rows);
  }
  for (const auto& r : part_rows) {
    const double ratio = static_cast<double>(r.remote_multilevel) / static_cast<double>(r.remote_random);
    check("partition trend seed " + std::to_string(r.seed), ratio <= 0.85, "remote ratio " + format_number(ratio));
    check("train balance seed " + std::to_string(r.seed), r.train_balance_multilevel <= 1.15,
          "max/avg " + format_number(r.train_balance_multilevel));
  }
  const auto skew = ex::skewed_train_balance(params, 1);
  check("skewed train balance", skew.one_hop > skew.multilevel,
        "one_hop " + format_number(skew.one_hop) + ", multilevel " + format_number(skew.multilevel));

  const auto eps = ex::shuffling_trend(params, eps_seeds, 10);
  {
    auto out = open_out(ctx.out / "repro_shuffling.csv");
    ex::write_shuffling_trend_csv(out, eps);
  }
  check("shuffling error trend", eps.spearman <= -0.8, "spearman " + format_number(eps.spearman));
  return failures;
}

}  // namespace gnnio::cli
