#include "config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gnnio/error.hpp"
#include "gnnio/text_format.hpp"

namespace gnnio::cli {

namespace {

template <typename T>
T parse_integer(std::string_view key, std::string_view value) {
  T v{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(std::string(key) + ": expected a nonnegative integer, got \"" + std::string(value) + "\"");
  }
  return v;
}

double parse_real(std::string_view key, std::string_view value) {
  std::string s(value);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw Error(std::string(key) + ": expected a number, got \"" + s + "\"");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw Error(std::string(key) + ": expected true or false, got \"" + std::string(value) + "\"");
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> out;
  while (true) {
    auto comma = value.find(',');
    auto item = trim(value.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return out;
}

std::string join(const std::vector<std::uint32_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
  return s;
}

std::string join(const std::vector<CachePolicy>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::string(to_string(v[i]));
  return s;
}

}  // namespace

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  auto u32 = [&](std::uint32_t& field) { field = parse_integer<std::uint32_t>(key, value); };
  auto u64 = [&](std::uint64_t& field) { field = parse_integer<std::uint64_t>(key, value); };
  auto real = [&](double& field) { field = parse_real(key, value); };

  if (key == "seed") u64(seed);
  else if (key == "graph.file") graph.file = std::string(value);
  else if (key == "graph.meta_file") graph.meta_file = std::string(value);
  else if (key == "graph.compact_ids") graph.compact_ids = parse_bool(key, value);
  else if (key == "graph.n") graph.n = parse_integer<NodeId>(key, value);
  else if (key == "graph.avg_degree") u32(graph.avg_degree);
  else if (key == "graph.train_fraction") real(graph.train_fraction);
  else if (key == "graph.num_labels") u32(graph.num_labels);
  else if (key == "graph.communities") u32(graph.communities);
  else if (key == "graph.intra_fraction") real(graph.intra_fraction);
  else if (key == "graph.locality_span") u32(graph.locality_span);
  else if (key == "graph.label_noise") real(graph.label_noise);
  else if (key == "graph.feature_dim") u32(graph.feature_dim);
  else if (key == "partition.method") partition.method = std::string(value);
  else if (key == "partition.k") u32(partition.k);
  else if (key == "partition.hops") u32(partition.hops);
  else if (key == "partition.threshold") u64(partition.threshold);
  else if (key == "partition.percentile") real(partition.percentile);
  else if (key == "partition.quality_samples") u64(partition.quality_samples);
  else if (key == "order.policy") order.policy = std::string(value);
  else if (key == "order.batch_size") u32(order.batch_size);
  else if (key == "order.workers") u32(order.workers);
  else if (key == "order.max_sequences") u32(order.max_sequences);
  else if (key == "order.num_sequences") u32(order.num_sequences);
  else if (key == "sample.fanouts") {
    sample.fanouts.clear();
    for (auto item : split_list(value)) sample.fanouts.push_back(parse_integer<std::uint32_t>(key, item));
  } else if (key == "cache.policies") {
    cache.policies.clear();
    for (auto item : split_list(value)) {
      try {
        cache.policies.push_back(parse_cache_policy(item));
      } catch (const Error& e) {
        throw Error(std::string(key) + ": " + e.what());
      }
    }
  } else if (key == "cache.capacities") {
    cache.capacities.clear();
    for (auto item : split_list(value)) cache.capacities.push_back(parse_real(key, item));
  } else if (key == "cache.policy") {
    try {
      cache.policy = parse_cache_policy(value);
    } catch (const Error& e) {
      throw Error(std::string(key) + ": " + e.what());
    }
  } else if (key == "cache.capacity") real(cache.capacity);
  else if (key == "cache.devices") u32(cache.devices);
  else if (key == "cache.host_capacity") real(cache.host_capacity);
  else if (key == "allocate.profile") allocate.profile = std::string(value);
  else if (key == "allocate.C_gs") u32(allocate.c_gs);
  else if (key == "allocate.C_wm") u32(allocate.c_wm);
  else if (key == "allocate.B_pcie") u32(allocate.b_pcie);
  else throw Error("unknown config key \"" + std::string(key) + "\"");
}

void ExperimentConfig::validate() const {
  auto fail = [](const char* field, const std::string& why) { throw Error(std::string(field) + ": " + why); };
  if (graph.file.empty()) {
    if (graph.n < 2) fail("graph.n", "must be >= 2");
    if (graph.avg_degree < 1 || graph.avg_degree >= graph.n) fail("graph.avg_degree", "must be in [1, graph.n)");
    if (graph.num_labels < 1) fail("graph.num_labels", "must be >= 1");
    if (!(graph.intra_fraction >= 0 && graph.intra_fraction <= 1)) fail("graph.intra_fraction", "must be in [0, 1]");
    if (!(graph.label_noise >= 0 && graph.label_noise <= 1)) fail("graph.label_noise", "must be in [0, 1]");
  }
  if (!(graph.train_fraction > 0 && graph.train_fraction <= 1)) fail("graph.train_fraction", "must be in (0, 1]");
  if (partition.method != "multilevel" && partition.method != "random" && partition.method != "one_hop") {
    fail("partition.method", "must be multilevel, random or one_hop");
  }
  if (partition.k < 1) fail("partition.k", "must be >= 1");
  if (partition.hops < 1) fail("partition.hops", "must be >= 1");
  if (partition.threshold < 1) fail("partition.threshold", "must be >= 1");
  if (!(partition.percentile > 0 && partition.percentile < 1)) fail("partition.percentile", "must be in (0, 1)");
  if (order.policy != "proximity" && order.policy != "random") fail("order.policy", "must be proximity or random");
  if (order.batch_size < 1) fail("order.batch_size", "must be >= 1");
  if (order.workers < 1) fail("order.workers", "must be >= 1");
  if (order.max_sequences < 1) fail("order.max_sequences", "must be >= 1");
  if (sample.fanouts.empty()) fail("sample.fanouts", "needs at least one hop");
  for (auto f : sample.fanouts) {
    if (f == 0) fail("sample.fanouts", "every fanout must be positive");
  }
  if (cache.policies.empty()) fail("cache.policies", "needs at least one policy");
  if (cache.capacities.empty()) fail("cache.capacities", "needs at least one capacity");
  for (double c : cache.capacities) {
    if (!(c >= 0 && c <= 1)) fail("cache.capacities", "fractions must be in [0, 1]");
  }
  if (!(cache.capacity >= 0 && cache.capacity <= 1)) fail("cache.capacity", "must be in [0, 1]");
  if (!(cache.host_capacity >= 0 && cache.host_capacity <= 1)) fail("cache.host_capacity", "must be in [0, 1]");
  if (cache.devices < 1) fail("cache.devices", "must be >= 1");
}

std::string ExperimentConfig::graph_key() const {
  std::ostringstream s;
  s << "seed=" << seed << '\n';
  if (!graph.file.empty()) {
    s << "graph.file=" << graph.file << "\ngraph.meta_file=" << graph.meta_file
      << "\ngraph.compact_ids=" << graph.compact_ids << "\ngraph.train_fraction=" << format_number(graph.train_fraction)
      << "\ngraph.feature_dim=" << graph.feature_dim << '\n';
    return s.str();
  }
  s << "graph.n=" << graph.n << "\ngraph.avg_degree=" << graph.avg_degree
    << "\ngraph.train_fraction=" << format_number(graph.train_fraction) << "\ngraph.num_labels=" << graph.num_labels
    << "\ngraph.communities=" << graph.communities << "\ngraph.intra_fraction=" << format_number(graph.intra_fraction)
    << "\ngraph.locality_span=" << graph.locality_span << "\ngraph.label_noise=" << format_number(graph.label_noise)
    << "\ngraph.feature_dim=" << graph.feature_dim << '\n';
  return s.str();
}

std::string ExperimentConfig::partition_key(std::string_view method) const {
  std::ostringstream s;
  s << graph_key() << "partition.method=" << method << "\npartition.k=" << partition.k;
  if (method == "multilevel") {
    s << "\npartition.hops=" << partition.hops << "\npartition.threshold=" << partition.threshold
      << "\npartition.percentile=" << format_number(partition.percentile);
  }
  s << '\n';
  return s.str();
}

std::string ExperimentConfig::order_key() const {
  std::ostringstream s;
  s << graph_key() << "order.policy=" << order.policy << "\norder.batch_size=" << order.batch_size;
  if (order.policy == "proximity") {
    s << "\norder.workers=" << order.workers << "\norder.max_sequences=" << order.max_sequences
      << "\norder.num_sequences=" << order.num_sequences;
  }
  s << '\n';
  return s.str();
}

std::string ExperimentConfig::sample_key() const {
  return order_key() + "sample.fanouts=" + join(sample.fanouts) + '\n';
}

std::string ExperimentConfig::cache_key() const {
  return sample_key() + "cache.policies=" + join(cache.policies) + "\ncache.capacities=" + join(cache.capacities) +
         "\ncache.policy=" + std::string(to_string(cache.policy)) + "\ncache.capacity=" + format_number(cache.capacity) +
         "\ncache.devices=" + std::to_string(cache.devices) + "\ncache.host_capacity=" +
         format_number(cache.host_capacity) + '\n';
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  ExperimentConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto eq = view.find('=');
    if (eq == std::string_view::npos) throw ParseError(path.string(), line_no, "expected key=value");
    try {
      cfg.set(trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(path.string(), line_no, e.what());
    }
  }
  return cfg;
}

std::string config_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gnnio::cli
