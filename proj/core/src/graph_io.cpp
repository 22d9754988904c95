#include <charconv>
#include <fstream>
#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>

#include "gnnio/error.hpp"
#include "gnnio/graph.hpp"
#include "gnnio/text_format.hpp"

namespace gnnio {

namespace {

template <typename T>
bool parse_number(std::string_view token, T& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

// Parses "# <key> <value>" directives; returns false for plain comments.
bool parse_directive(std::string_view line, std::string_view key, std::uint64_t& value) {
  auto tokens = split_whitespace(line.substr(1));
  return tokens.size() == 2 && tokens[0] == key && parse_number(tokens[1], value);
}

}  // namespace

Graph load_edge_list(const std::filesystem::path& path, const LoadOptions& options) {
  auto in = open_input(path);
  const auto source = path.string();

  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
  std::uint64_t declared_nodes = 0;
  bool has_declared = false;
  std::uint64_t max_id = 0;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      std::uint64_t n = 0;
      if (parse_directive(view, "nodes", n)) {
        declared_nodes = n;
        has_declared = true;
      }
      continue;
    }
    auto tokens = split_whitespace(view);
    std::uint64_t src = 0, dst = 0;
    if (tokens.size() != 2 || !parse_number(tokens[0], src) || !parse_number(tokens[1], dst)) {
      throw ParseError(source, line_no, "expected \"src dst\" with nonnegative integer IDs, got \"" +
                                            std::string(view) + "\"");
    }
    max_id = std::max({max_id, src, dst});
    raw.emplace_back(src, dst);
  }
  if (raw.empty() && !has_declared) throw Error("empty graph: " + source);

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  std::vector<std::uint64_t> originals;
  std::uint64_t num_nodes = 0;

  if (options.compact_ids) {
    std::unordered_map<std::uint64_t, NodeId> dense;
    auto remap = [&](std::uint64_t id) {
      auto [it, inserted] = dense.try_emplace(id, static_cast<NodeId>(originals.size()));
      if (inserted) originals.push_back(id);
      return it->second;
    };
    for (auto [s, d] : raw) {
      NodeId a = remap(s);
      edges.push_back({a, remap(d)});
    }
    num_nodes = originals.size();
  } else {
    num_nodes = raw.empty() ? 0 : max_id + 1;
    if (has_declared) {
      if (declared_nodes < num_nodes) {
        throw ParseError(source, 0, "\"# nodes\" smaller than the largest node ID");
      }
      num_nodes = declared_nodes;
    }
    for (auto [s, d] : raw) edges.push_back({static_cast<NodeId>(s), static_cast<NodeId>(d)});
  }
  if (num_nodes > std::numeric_limits<NodeId>::max()) throw Error("too many nodes in " + source);
  if (num_nodes == 0) throw Error("empty graph: " + source);

  auto g = Graph::from_edges(static_cast<NodeId>(num_nodes), edges, options.undirected);
  if (options.compact_ids) g.set_original_ids(std::move(originals));
  return g;
}

void save_edge_list(const Graph& g, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "# nodes " << g.num_nodes() << '\n';
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    for (NodeId u : g.neighbors(v)) out << v << ' ' << u << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

void save_metadata(const Graph& g, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "# feature_dim " << g.feature_dim() << '\n';
  out << "# node_id label is_train\n";
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    out << v << ' ' << g.label(v) << ' ' << (g.is_train(v) ? 1 : 0) << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

void load_metadata(Graph& g, const std::filesystem::path& path) {
  auto in = open_input(path);
  const auto source = path.string();
  std::vector<Label> labels(g.num_nodes(), kNoLabel);
  std::vector<std::uint8_t> mask(g.num_nodes(), 0);
  std::uint64_t feature_dim = 0;
  bool any_label = false;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      parse_directive(view, "feature_dim", feature_dim);
      continue;
    }
    auto tokens = split_whitespace(view);
    std::uint64_t node = 0;
    Label label = 0;
    int is_train = 0;
    if (tokens.size() != 3 || !parse_number(tokens[0], node) || !parse_number(tokens[1], label) ||
        !parse_number(tokens[2], is_train) || (is_train != 0 && is_train != 1)) {
      throw ParseError(source, line_no, "expected \"node_id label is_train\"");
    }
    if (node >= g.num_nodes()) throw ParseError(source, line_no, "node_id out of range");
    if (label < kNoLabel) throw ParseError(source, line_no, "label must be >= -1");
    labels[node] = label;
    any_label = any_label || label != kNoLabel;
    mask[node] = static_cast<std::uint8_t>(is_train);
  }
  g.set_train_mask(std::move(mask));
  g.set_labels(any_label ? std::move(labels) : std::vector<Label>{});
  g.set_feature_dim(static_cast<std::uint32_t>(feature_dim));
  g.validate();
}

}  // namespace gnnio
