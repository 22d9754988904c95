#include <algorithm>
#include <cmath>
#include <numeric>

#include "gnnio/error.hpp"
#include "gnnio/graph.hpp"
#include "gnnio/random.hpp"

namespace gnnio {

std::vector<std::uint8_t> sample_train_mask(NodeId n, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw Error("train_fraction must be in (0, 1]");
  const auto count = static_cast<NodeId>(std::floor(fraction * static_cast<double>(n)));
  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), NodeId{0});
  Rng rng(mix_seed(seed, 0x7a1));
  for (NodeId i = 0; i < count; ++i) {
    auto j = i + static_cast<NodeId>(uniform_below(rng, n - i));
    std::swap(ids[i], ids[j]);
  }
  std::vector<std::uint8_t> mask(n, 0);
  for (NodeId i = 0; i < count; ++i) mask[ids[i]] = 1;
  return mask;
}

Graph generate_power_law(NodeId n, std::uint32_t avg_degree, std::uint64_t seed,
                         double train_fraction, std::uint32_t num_labels,
                         const PowerLawOptions& options) {
  if (n < 2) throw Error("power-law generator needs n >= 2");
  if (avg_degree < 1) throw Error("avg_degree must be >= 1");
  if (avg_degree >= n) throw Error("avg_degree must be smaller than n");
  if (num_labels < 1) throw Error("num_labels must be >= 1");
  if (options.intra_fraction < 0.0 || options.intra_fraction > 1.0) {
    throw Error("intra_fraction must be in [0, 1]");
  }
  const std::uint32_t communities =
      std::clamp<std::uint32_t>(options.num_communities ? options.num_communities : num_labels, 1, n);
  auto community_of = [&](NodeId v) {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(v) * communities / n);
  };

  const std::uint32_t span = std::min(options.locality_span, communities / 2);

  Rng rng(mix_seed(seed, 0x9a));
  std::vector<NodeId> arrival(n);
  std::iota(arrival.begin(), arrival.end(), NodeId{0});
  std::shuffle(arrival.begin(), arrival.end(), rng);

  // Degree-weighted urns: every edge endpoint plus one entry per arrived node,
  // so an urn draw picks a node with probability proportional to degree + 1.
  std::vector<NodeId> global_urn;
  std::vector<std::vector<NodeId>> community_urn(communities);
  global_urn.reserve(static_cast<std::size_t>(n) * (avg_degree + 1));

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (avg_degree / 2 + 1));
  std::bernoulli_distribution extra_edge(0.5);
  std::bernoulli_distribution intra(options.intra_fraction);
  std::vector<NodeId> targets;

  for (NodeId arrived = 0; arrived < n; ++arrived) {
    const NodeId v = arrival[arrived];
    const auto c = community_of(v);
    std::uint32_t want = avg_degree / 2;
    if (avg_degree % 2 == 1 && extra_edge(rng)) ++want;
    want = std::min<std::uint32_t>(want, arrived);

    targets.clear();
    for (std::uint32_t attempt = 0; targets.size() < want && attempt < 16 * want + 16; ++attempt) {
      const std::vector<NodeId>* urn = &global_urn;
      if (intra(rng)) {
        urn = &community_urn[c];
      } else if (span > 0) {
        auto step = 1 + static_cast<std::uint32_t>(uniform_below(rng, span));
        urn = &community_urn[uniform_below(rng, 2) ? (c + step) % communities : (c + communities - step) % communities];
      }
      if (urn->empty()) continue;
      NodeId u = (*urn)[uniform_below(rng, urn->size())];
      if (std::find(targets.begin(), targets.end(), u) == targets.end()) targets.push_back(u);
    }
    for (NodeId u : targets) {
      edges.push_back({v, u});
      global_urn.push_back(u);
      global_urn.push_back(v);
      community_urn[community_of(u)].push_back(u);
      community_urn[c].push_back(v);
    }
    global_urn.push_back(v);
    community_urn[c].push_back(v);
  }

  auto g = Graph::from_edges(n, edges, /*undirected=*/true);

  std::vector<Label> labels(n);
  std::bernoulli_distribution noisy(options.label_noise);
  for (NodeId v = 0; v < n; ++v) {
    auto label = static_cast<Label>(community_of(v) % num_labels);
    if (options.label_noise > 0.0 && noisy(rng)) {
      label = static_cast<Label>(uniform_below(rng, num_labels));
    }
    labels[v] = label;
  }
  g.set_labels(std::move(labels));
  g.set_train_mask(sample_train_mask(n, train_fraction, seed));
  g.set_feature_dim(options.feature_dim);
  return g;
}

}  // namespace gnnio
