#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "gnnio/error.hpp"

int main(int argc, char** argv) {
  using namespace gnnio::cli;

  CLI::App app{"gnnio: data I/O experiments for sampled GNN training"};
  app.require_subcommand(1);
  std::string config_file, out_dir = "gnnio-out";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_file, "flat key=value config file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "overrides the config seed");
  app.add_option("--out", out_dir, "artifact directory");
  app.add_option("--set", overrides, "extra section.key=value assignment (repeatable)");

  auto* gen = app.add_subcommand("gen", "generate or import the graph");
  auto* partition = app.add_subcommand("partition", "partition the graph (all methods, selected one used downstream)");
  auto* order = app.add_subcommand("order", "build the training-node batch schedule");
  auto* sample = app.add_subcommand("sample", "sample one epoch and account communication");
  auto* cache = app.add_subcommand("cache", "simulate the feature cache over the sampled trace");
  auto* allocate = app.add_subcommand("allocate", "solve the pipeline resource allocation");
  std::string profile;
  allocate->add_option("--profile", profile, "profile file (overrides allocate.profile)");
  auto* report = app.add_subcommand("report", "join metrics into comparison tables");
  auto* repro = app.add_subcommand("repro", "run the pinned-seed trend experiments");
  bool quick = false;
  repro->add_flag("--quick", quick, "use a 20k-node graph");

  CLI11_PARSE(app, argc, argv);

  try {
    Context ctx;
    if (!config_file.empty()) ctx.cfg = gnnio::cli::load_config(config_file);
    for (const auto& assignment : overrides) {
      auto eq = assignment.find('=');
      if (eq == std::string::npos) throw gnnio::Error("--set expects key=value, got \"" + assignment + "\"");
      ctx.cfg.set(assignment.substr(0, eq), assignment.substr(eq + 1));
    }
    if (seed) ctx.cfg.seed = *seed;
    ctx.out = out_dir;
    ctx.log = &std::cout;

    if (gen->parsed()) cmd_gen(ctx);
    else if (partition->parsed()) cmd_partition(ctx);
    else if (order->parsed()) cmd_order(ctx);
    else if (sample->parsed()) cmd_sample(ctx);
    else if (cache->parsed()) cmd_cache(ctx);
    else if (allocate->parsed()) cmd_allocate(ctx, profile);
    else if (report->parsed()) cmd_report(ctx);
    else if (repro->parsed()) return cmd_repro(ctx, quick) == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "gnnio: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
