#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "gnnio/error.hpp"
#include "gnnio/sampler.hpp"
#include "test_util.hpp"

namespace gnnio {
namespace {

SamplingConfig config(std::vector<std::uint32_t> fanouts, std::uint64_t seed = 0) {
  SamplingConfig cfg;
  cfg.fanouts = std::move(fanouts);
  cfg.seed = seed;
  return cfg;
}

TEST(SamplingConfigTest, Validation) {
  EXPECT_THROW(config({}).validate(), Error);
  EXPECT_THROW(config({3, 0}).validate(), Error);
  EXPECT_NO_THROW(config({15, 10, 5}).validate());
}

TEST(SampleBatch, FanoutClampsToDegree) {
  Graph g = testing::path_graph(2);
  std::vector<NodeId> seeds{0};
  SampledBatch b = sample_batch(g, seeds, config({2}), 1);
  EXPECT_EQ(b.hops[1], std::vector<NodeId>{1});
}

TEST(SampleBatch, LargeFanoutTakesWholeNeighborhood) {
  Graph g = testing::random_graph(30, 80, 2);
  for (NodeId v = 0; v < 30; ++v) {
    std::vector<NodeId> seeds{v};
    SampledBatch b = sample_batch(g, seeds, config({1000}), 5);
    std::set<NodeId> got(b.hops[1].begin(), b.hops[1].end());
    std::set<NodeId> want(g.neighbors(v).begin(), g.neighbors(v).end());
    EXPECT_EQ(got, want);
  }
}

TEST(SampleBatch, StarTwoHops) {
  Graph g = testing::star_graph(8);
  std::vector<NodeId> seeds{0};
  SampledBatch b = sample_batch(g, seeds, config({3, 3}), 4);
  EXPECT_EQ(b.hops[1].size(), 3u);
  EXPECT_EQ(b.hops[2], std::vector<NodeId>{0});
  EXPECT_EQ(b.distinct.size(), 4u);
  EXPECT_EQ(b.distinct.front(), 0u);
}

TEST(SampleBatch, PureFunctionOfArguments) {
  Graph g = generate_power_law(2000, 10, 1, 0.1, 4);
  std::vector<NodeId> seeds{1, 5, 9, 200};
  SamplingConfig cfg = config({15, 10, 5});
  SampledBatch a = sample_batch(g, seeds, cfg, 77);
  SampledBatch b = sample_batch(g, seeds, cfg, 77);
  EXPECT_EQ(a.hops, b.hops);
  EXPECT_EQ(a.distinct, b.distinct);
}

TEST(SimulateEpoch, SinglePartitionHasNoRemote) {
  Graph g = testing::random_graph(200, 500, 3);
  Partitioning p = make_partitioning(g, std::vector<PartId>(200, 0), 1);
  EpochResult r = simulate_epoch(g, p, random_shuffle_schedule(g, 16, 1), config({5, 5}));
  EXPECT_EQ(r.comm.remote_accesses, 0u);
  EXPECT_GT(r.comm.local_accesses, 0u);
  EXPECT_EQ(r.comm.remote_fraction(), 0.0);
}

TEST(SimulateEpoch, SeedLoadsSumToTrainingSet) {
  Graph g = testing::random_graph(300, 700, 4);
  Partitioning p = random_partition(g, 3, 2);
  EpochResult r = simulate_epoch(g, p, random_shuffle_schedule(g, 20, 1), config({4, 3}));
  EXPECT_EQ(std::accumulate(r.comm.seed_load.begin(), r.comm.seed_load.end(), std::uint64_t{0}), g.num_train());
  EXPECT_EQ(std::accumulate(r.comm.request_load.begin(), r.comm.request_load.end(), std::uint64_t{0}),
            r.comm.total_lookups());
}

TEST(SimulateEpoch, RandomPartitionRemoteFraction) {
  Graph g = generate_power_law(50000, 10, 3, 0.1, 8);
  Partitioning p = random_partition(g, 4, 1);
  SamplingConfig cfg = config({15, 10, 5}, 3);
  EpochResult r = simulate_epoch(g, p, random_shuffle_schedule(g, 1000, 2), cfg);
  EXPECT_NEAR(r.comm.remote_fraction(), 0.75, 0.05);
}

TEST(SimulateEpoch, TraceMatchesSampleTrace) {
  Graph g = testing::random_graph(150, 400, 6);
  BatchSchedule s = proximity_schedule(g, 2, 10, 3);
  SamplingConfig cfg = config({3, 2}, 8);
  EpochResult r = simulate_epoch(g, random_partition(g, 2, 1), s, cfg);
  EXPECT_EQ(r.trace.batches, sample_trace(g, s, cfg).batches);
}

TEST(SimulateEpoch, BatchSeedsVaryByIndex) {
  SamplingConfig cfg = config({2}, 5);
  EXPECT_NE(batch_seed(cfg, 0), batch_seed(cfg, 1));
  EXPECT_EQ(batch_seed(cfg, 3), batch_seed(cfg, 3));
}

TEST(TraceIo, RoundTrip) {
  testing::TempDir dir("trace");
  Graph g = testing::random_graph(100, 250, 7);
  AccessTrace t = sample_trace(g, random_shuffle_schedule(g, 8, 1), config({3, 3}));
  save_trace(t, dir / "t.txt");
  EXPECT_EQ(load_trace(dir / "t.txt").batches, t.batches);
  EXPECT_EQ(t.total_accesses(), load_trace(dir / "t.txt").total_accesses());
}

TEST(CommCsv, HasHeader) {
  EpochCommReport r;
  r.local_accesses = 3;
  r.remote_accesses = 1;
  r.seed_load = {2, 2};
  r.request_load = {3, 1};
  std::ostringstream comm, load;
  write_comm_csv(comm, r);
  write_partition_load_csv(load, r);
  EXPECT_NE(comm.str().find("remote"), std::string::npos);
  EXPECT_NE(comm.str().find("0.25"), std::string::npos);
  const std::string rows = load.str();
  EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 3);
}

}  // namespace
}  // namespace gnnio
