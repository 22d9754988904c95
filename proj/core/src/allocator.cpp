#include "gnnio/allocator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <string>

#include "gnnio/error.hpp"
#include "gnnio/text_format.hpp"

namespace gnnio {

namespace {

constexpr std::array<std::string_view, kNumStages> kStageNames = {
    "sampling", "subgraph_build", "network", "subgraph_process", "pcie_subgraph", "cache", "pcie_features", "gpu"};

double parse_double(std::string_view text, const std::string& source, std::size_t line, std::string_view key) {
  std::string s(text);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw ParseError(source, line, "bad value for " + std::string(key) + ": \"" + s + "\"");
  }
  return v;
}

std::uint32_t parse_count(std::string_view text, const std::string& source, std::size_t line, std::string_view key) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(source, line, "bad value for " + std::string(key) + ": \"" + std::string(text) + "\"");
  }
  return v;
}

}  // namespace

std::string_view stage_name(std::size_t stage) {
  if (stage >= kNumStages) throw Error("stage index out of range");
  return kStageNames[stage];
}

void PipelineProfile::validate() const {
  for (double v : {t1, t2, t3, t_net, t_gpu, d_1, d_2}) {
    if (!(v >= 0) || !std::isfinite(v)) throw Error("profile quantities must be finite and nonnegative");
  }
  if (!(bytes_per_unit > 0)) throw Error("bytes_per_unit must be positive");
  for (const auto& s : cache_samples) {
    if (!(s.cores >= 1) || !(s.seconds >= 0)) throw Error("cache samples need cores >= 1 and seconds >= 0");
  }
}

CacheCostModel fit_cache_cost(std::span<const CostSample> samples) {
  std::set<double> distinct;
  for (const auto& s : samples) {
    if (!(s.cores > 0)) throw Error("cache sample with non-positive core count");
    distinct.insert(s.cores);
  }
  if (distinct.size() < 2) throw Error("cache cost fit needs samples at two or more distinct core counts");

  const auto n = static_cast<double>(samples.size());
  double sx = 0, sy = 0;
  for (const auto& s : samples) {
    sx += 1.0 / s.cores;
    sy += s.seconds;
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& s : samples) {
    const double dx = 1.0 / s.cores - mx;
    sxx += dx * dx;
    sxy += dx * (s.seconds - my);
  }
  CacheCostModel m;
  m.a = sxy / sxx;
  if (m.a < 0) m.a = 0;
  m.d = my - m.a * mx;
  return m;
}

PlanEvaluation evaluate_plan(const PipelineProfile& p, const CacheCostModel& model, const AllocationPlan& plan) {
  PlanEvaluation e;
  e.stage_time = {p.t1 / plan.c1,
                  p.t2 / plan.c2,
                  p.t_net,
                  p.t3 / plan.c3,
                  p.d_1 / (plan.b_1 * p.bytes_per_unit),
                  model(plan.c4),
                  p.d_2 / (plan.b_2 * p.bytes_per_unit),
                  p.t_gpu};
  for (std::size_t i = 0; i < kNumStages; ++i) {
    if (e.stage_time[i] > e.bottleneck) {
      e.bottleneck = e.stage_time[i];
      e.bottleneck_index = i;
    }
  }
  return e;
}

AllocationPlan solve_allocation(const PipelineProfile& p, const CacheCostModel& model, const Capacities& caps) {
  if (caps.c_gs < 2 || caps.c_wm < 2 || caps.b_pcie < 2) {
    throw Error("every capacity must be >= 2 so that each stage gets a unit");
  }
  p.validate();

  // Prefixes whose partial max already reaches the incumbent are skipped whole.
  AllocationPlan best;
  double best_value = INFINITY;
  std::uint64_t evaluated = 0;
  const double bw = p.bytes_per_unit;
  for (std::uint32_t c1 = 1; c1 < caps.c_gs; ++c1) {
    const std::uint32_t c2 = caps.c_gs - c1;
    const double gs = std::max({p.t1 / c1, p.t2 / c2, p.t_net, p.t_gpu});
    if (gs >= best_value) {
      evaluated += std::uint64_t{caps.c_wm - 1} * (caps.b_pcie - 1);
      continue;
    }
    for (std::uint32_t c3 = 1; c3 < caps.c_wm; ++c3) {
      const std::uint32_t c4 = caps.c_wm - c3;
      const double wm = std::max({gs, p.t3 / c3, model(c4)});
      if (wm >= best_value) {
        evaluated += caps.b_pcie - 1;
        continue;
      }
      for (std::uint32_t b1 = 1; b1 < caps.b_pcie; ++b1) {
        ++evaluated;
        const std::uint32_t b2 = caps.b_pcie - b1;
        const double v = std::max({wm, p.d_1 / (b1 * bw), p.d_2 / (b2 * bw)});
        if (v < best_value) {
          best_value = v;
          best = {c1, c2, c3, c4, b1, b2, 0, {}, 0};
        }
      }
    }
  }
  auto eval = evaluate_plan(p, model, best);
  best.bottleneck = eval.bottleneck;
  best.bottleneck_stage = stage_name(eval.bottleneck_index);
  best.candidates = evaluated;
  return best;
}

PipelineProfile load_profile(const std::filesystem::path& path, Capacities* caps) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  const std::string source = path.string();
  PipelineProfile p;
  Capacities c;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto eq = view.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, line_no, "expected key=value");
    auto key = trim(view.substr(0, eq));
    auto value = trim(view.substr(eq + 1));
    if (key == "T1") p.t1 = parse_double(value, source, line_no, key);
    else if (key == "T2") p.t2 = parse_double(value, source, line_no, key);
    else if (key == "T3") p.t3 = parse_double(value, source, line_no, key);
    else if (key == "T_net") p.t_net = parse_double(value, source, line_no, key);
    else if (key == "T_gpu") p.t_gpu = parse_double(value, source, line_no, key);
    else if (key == "D_I") p.d_1 = parse_double(value, source, line_no, key);
    else if (key == "D_II") p.d_2 = parse_double(value, source, line_no, key);
    else if (key == "bytes_per_unit") p.bytes_per_unit = parse_double(value, source, line_no, key);
    else if (key == "C_gs") c.c_gs = parse_count(value, source, line_no, key);
    else if (key == "C_wm") c.c_wm = parse_count(value, source, line_no, key);
    else if (key == "B_pcie") c.b_pcie = parse_count(value, source, line_no, key);
    else if (key == "cache_sample") {
      auto colon = value.find(':');
      if (colon == std::string_view::npos) throw ParseError(source, line_no, "cache_sample expects CORES:SECONDS");
      p.cache_samples.push_back({parse_double(trim(value.substr(0, colon)), source, line_no, key),
                                 parse_double(trim(value.substr(colon + 1)), source, line_no, key)});
    } else {
      throw ParseError(source, line_no, "unknown key \"" + std::string(key) + "\"");
    }
  }
  try {
    p.validate();
  } catch (const Error& e) {
    throw Error(source + ": " + e.what());
  }
  if (caps) *caps = c;
  return p;
}

void write_plan(std::ostream& out, const AllocationPlan& plan) {
  out << "c1=" << plan.c1 << "\nc2=" << plan.c2 << "\nc3=" << plan.c3 << "\nc4=" << plan.c4
      << "\nb_I=" << plan.b_1 << "\nb_II=" << plan.b_2 << "\nbottleneck=" << format_number(plan.bottleneck)
      << "\nbottleneck_stage=" << plan.bottleneck_stage << "\ncandidates=" << plan.candidates << '\n';
}

void write_plan_csv(std::ostream& out, const AllocationPlan& plan, const PlanEvaluation& eval) {
  CsvWriter csv(out, {"c1", "c2", "c3", "c4", "b_I", "b_II", "bottleneck", "bottleneck_stage", "sampling",
                      "subgraph_build", "network", "subgraph_process", "pcie_subgraph", "cache", "pcie_features",
                      "gpu"});
  csv.cell(plan.c1).cell(plan.c2).cell(plan.c3).cell(plan.c4).cell(plan.b_1).cell(plan.b_2);
  csv.cell(plan.bottleneck).cell(plan.bottleneck_stage);
  for (double t : eval.stage_time) csv.cell(t);
  csv.end_row();
}

}  // namespace gnnio
