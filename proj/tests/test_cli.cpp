#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "experiments.hpp"
#include "gnnio/error.hpp"
#include "test_util.hpp"

namespace gnnio::cli {
namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

Context small_context(const std::filesystem::path& out, NodeId n = 2000) {
  Context ctx;
  ctx.out = out;
  ctx.cfg.set("graph.n", std::to_string(n));
  ctx.cfg.set("graph.avg_degree", "6");
  ctx.cfg.set("graph.communities", "8");
  ctx.cfg.set("graph.train_fraction", "0.2");
  ctx.cfg.set("order.batch_size", "50");
  ctx.cfg.set("order.max_sequences", "3");
  ctx.cfg.set("sample.fanouts", "5,3");
  ctx.cfg.set("partition.quality_samples", "500");
  return ctx;
}

TEST(Config, SetAndValidateNameFields) {
  ExperimentConfig cfg;
  cfg.set("partition.k", "8");
  EXPECT_EQ(cfg.partition.k, 8u);
  cfg.set("sample.fanouts", "4,3,2");
  EXPECT_EQ(cfg.sample.fanouts, (std::vector<std::uint32_t>{4, 3, 2}));
  cfg.set("cache.policies", "fifo,lru");
  EXPECT_EQ(cfg.cache.policies.size(), 2u);

  try {
    cfg.set("partition.k", "many");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("partition.k"), std::string::npos);
  }
  try {
    cfg.set("partition.colour", "1");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("unknown config key"), std::string::npos);
  }
  cfg.set("order.batch_size", "0");
  try {
    cfg.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("order.batch_size"), std::string::npos);
  }
}

TEST(Config, DefaultsAreTheReferenceSetup) {
  ExperimentConfig cfg;
  EXPECT_EQ(cfg.order.batch_size, 1000u);
  EXPECT_EQ(cfg.sample.fanouts, (std::vector<std::uint32_t>{15, 10, 5}));
  EXPECT_EQ(cfg.partition.hops, 2u);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, LoadFileReportsLine) {
  testing::TempDir dir("cfg");
  {
    std::ofstream out(dir / "ok.conf");
    out << "# experiment\nseed = 9\ngraph.n=500\n\npartition.method=random\n";
  }
  ExperimentConfig cfg = load_config(dir / "ok.conf");
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.graph.n, 500u);
  EXPECT_EQ(cfg.partition.method, "random");
  {
    std::ofstream out(dir / "bad.conf");
    out << "seed=1\nno equals sign\n";
  }
  try {
    load_config(dir / "bad.conf");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Config, HashIsStable) {
  EXPECT_EQ(config_hash(""), "cbf29ce484222325");
  EXPECT_EQ(config_hash("a"), "af63dc4c8601ec8c");
  ExperimentConfig a, b;
  b.set("partition.k", "2");
  EXPECT_EQ(a.graph_key(), b.graph_key());
  EXPECT_NE(a.partition_key("multilevel"), b.partition_key("multilevel"));
}

TEST(Commands, GenIsByteIdentical) {
  testing::TempDir one("cli"), two("cli");
  Context a = small_context(one.path()), b = small_context(two.path());
  cmd_gen(a);
  cmd_gen(b);
  EXPECT_EQ(slurp(graph_path(a)), slurp(graph_path(b)));
  EXPECT_EQ(slurp(meta_path(a)), slurp(meta_path(b)));
  EXPECT_FALSE(slurp(graph_path(a)).empty());
}

TEST(Commands, SampleWithoutPartitionNamesPartition) {
  testing::TempDir dir("cli");
  Context ctx = small_context(dir.path());
  cmd_gen(ctx);
  cmd_order(ctx);
  try {
    cmd_sample(ctx);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("run partition first"), std::string::npos) << e.what();
  }
}

TEST(Commands, DownstreamWithoutGraphNamesGen) {
  testing::TempDir dir("cli");
  Context ctx = small_context(dir.path());
  try {
    cmd_partition(ctx);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("run gen first"), std::string::npos);
  }
}

void run_pipeline(const Context& ctx) {
  cmd_gen(ctx);
  cmd_partition(ctx);
  cmd_order(ctx);
  cmd_sample(ctx);
  cmd_cache(ctx);
  cmd_report(ctx);
}

TEST(Commands, TenNodePipelineReportShape) {
  testing::TempDir dir("cli");
  Context ctx;
  ctx.out = dir.path();
  ctx.cfg.set("graph.n", "10");
  ctx.cfg.set("graph.avg_degree", "3");
  ctx.cfg.set("graph.communities", "2");
  ctx.cfg.set("graph.num_labels", "2");
  ctx.cfg.set("graph.train_fraction", "0.5");
  ctx.cfg.set("order.batch_size", "2");
  ctx.cfg.set("sample.fanouts", "2,2");
  ctx.cfg.set("cache.capacities", "0.1,0.5,1");
  run_pipeline(ctx);
  const std::string hits = slurp(metrics_path(ctx, "report_cache_hits"));
  EXPECT_EQ(lines(hits), 1 + 4 * 3u);
  EXPECT_EQ(hits.rfind("policy,capacity", 0), 0u);
  const std::string table = slurp(metrics_path(ctx, "report_partitions"));
  EXPECT_EQ(lines(table), 1 + 3u);
}

TEST(Commands, PipelineMetricsAreDeterministic) {
  testing::TempDir one("cli"), two("cli");
  Context a = small_context(one.path()), b = small_context(two.path());
  run_pipeline(a);
  run_pipeline(b);
  for (const char* name : {"gen", "partition_quality", "order", "order_epsilon", "sample_comm", "sample_load",
                           "cache_sweep", "cache_batches", "report_cache_hits", "report_partitions"}) {
    const std::string text = slurp(metrics_path(a, name));
    EXPECT_FALSE(text.empty()) << name;
    EXPECT_EQ(text, slurp(metrics_path(b, name))) << name;
  }
}

TEST(Commands, AllocateFromProfile) {
  testing::TempDir dir("cli");
  {
    std::ofstream out(dir / "profile.txt");
    out << "T1=10\nT2=10\nT3=1\ncache_sample=1:10\ncache_sample=2:5.5\nC_gs=10\nC_wm=4\nB_pcie=4\n";
  }
  Context ctx;
  ctx.out = dir.path() / "out";
  cmd_allocate(ctx, (dir / "profile.txt").string());
  bool found = false;
  for (const auto& entry : std::filesystem::directory_iterator(ctx.out)) {
    if (entry.path().filename().string().rfind("allocation-", 0) == 0) {
      const std::string csv = slurp(entry.path());
      EXPECT_EQ(csv.rfind("c1,c2", 0), 0u);
      found = true;
    }
  }
  EXPECT_TRUE(found);
  EXPECT_THROW(cmd_allocate(ctx, (dir / "missing.txt").string()), Error);
}

TEST(Experiments, SpearmanAverageRanks) {
  std::vector<double> x{1, 2, 3, 4}, down{4, 3, 2, 1}, tied{1, 1, 2, 2};
  EXPECT_DOUBLE_EQ(experiments::spearman(x, x), 1.0);
  EXPECT_DOUBLE_EQ(experiments::spearman(x, down), -1.0);
  EXPECT_NEAR(experiments::spearman(x, tied), 0.894427191, 1e-9);
}

TEST(Experiments, SkewedGraphConcentratesTraining) {
  experiments::PlantedGraphParams params;
  params.n = 4000;
  params.communities = 16;
  Graph g = experiments::skewed_training_graph(params, 1);
  for (NodeId v : g.training_nodes()) EXPECT_LT(v, 1000u);
  EXPECT_GT(g.num_train(), 0u);
}

}  // namespace
}  // namespace gnnio::cli
