#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "config.hpp"

namespace gnnio::cli {

struct Context {
  ExperimentConfig cfg;
  std::filesystem::path out = "gnnio-out";
  std::ostream* log = nullptr;  // progress and summaries; may be null
};

void cmd_gen(const Context& ctx);
void cmd_partition(const Context& ctx);
void cmd_order(const Context& ctx);
void cmd_sample(const Context& ctx);
void cmd_cache(const Context& ctx);
void cmd_allocate(const Context& ctx, const std::string& profile_override);
void cmd_report(const Context& ctx);
/// Pinned-seed trend experiments. Returns the number of failed checks.
int cmd_repro(const Context& ctx, bool quick);

/// Paths of the artifacts each command writes, for tests and the report.
std::filesystem::path graph_path(const Context& ctx);
std::filesystem::path meta_path(const Context& ctx);
std::filesystem::path partition_path(const Context& ctx, const std::string& method);
std::filesystem::path schedule_path(const Context& ctx);
std::filesystem::path trace_path(const Context& ctx);
std::filesystem::path metrics_path(const Context& ctx, const std::string& name);

}  // namespace gnnio::cli
