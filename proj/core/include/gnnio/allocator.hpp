#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace gnnio {

struct CostSample {
  double cores = 0;
  double seconds = 0;
};

struct PipelineProfile {
  double t1 = 0, t2 = 0, t3 = 0;  // CPU-seconds at one core
  double t_net = 0;
  double t_gpu = 0;
  double d_1 = 0, d_2 = 0;           // bytes moved over the shared interconnect
  double bytes_per_unit = 1.0;       // throughput of one bandwidth unit, bytes/s
  std::vector<CostSample> cache_samples;

  /// Throws on negative quantities or a non-positive unit throughput.
  void validate() const;
};

/// f(c) = a / c + d
struct CacheCostModel {
  double a = 0;
  double d = 0;

  double operator()(double cores) const { return a / cores + d; }
};

struct Capacities {
  std::uint32_t c_gs = 0;    // graph-store cores
  std::uint32_t c_wm = 0;    // worker cores
  std::uint32_t b_pcie = 0;  // bandwidth units
};

inline constexpr std::size_t kNumStages = 8;

/// Stage labels in objective order.
std::string_view stage_name(std::size_t stage);

struct AllocationPlan {
  std::uint32_t c1 = 0, c2 = 0, c3 = 0, c4 = 0;
  std::uint32_t b_1 = 0, b_2 = 0;
  double bottleneck = 0;
  std::string_view bottleneck_stage;
  std::uint64_t candidates = 0;  // plans covered by the search, pruned or not
};

struct PlanEvaluation {
  std::array<double, kNumStages> stage_time{};
  double bottleneck = 0;
  std::size_t bottleneck_index = 0;
};

/// Least squares fit of seconds against 1/cores, with a clamped at zero.
CacheCostModel fit_cache_cost(std::span<const CostSample> samples);

PlanEvaluation evaluate_plan(const PipelineProfile& profile, const CacheCostModel& model, const AllocationPlan& plan);

/// Exhaustive search over (c1, c3, b_1); the complementary stage of each
/// constraint receives every remaining unit. Ties resolve to the smallest
/// c1, then c3, then b_1.
AllocationPlan solve_allocation(const PipelineProfile& profile, const CacheCostModel& model, const Capacities& caps);

/// key=value file. Keys: T1 T2 T3 T_net T_gpu D_I D_II bytes_per_unit,
/// repeated cache_sample=CORES:SECONDS, and optionally C_gs C_wm B_pcie.
PipelineProfile load_profile(const std::filesystem::path& path, Capacities* caps = nullptr);

void write_plan(std::ostream& out, const AllocationPlan& plan);
void write_plan_csv(std::ostream& out, const AllocationPlan& plan, const PlanEvaluation& eval);

}  // namespace gnnio
