#include "gnnio/ordering.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

#include "gnnio/error.hpp"
#include "gnnio/random.hpp"
#include "gnnio/text_format.hpp"

namespace gnnio {

std::size_t BatchSchedule::num_nodes() const {
  std::size_t total = 0;
  for (const auto& b : batches) total += b.size();
  return total;
}

Sequence bfs_training_order(const Graph& g, std::span<const NodeId> shard, NodeId root, std::uint64_t seed) {
  const NodeId n = g.num_nodes();
  if (root >= n) throw Error("BFS root out of range");
  std::vector<std::uint8_t> member(n, 0);
  for (NodeId v : shard) member[v] = 1;

  std::vector<NodeId> restarts(shard.begin(), shard.end());
  Rng rng(mix_seed(seed, 0xbf5));
  std::shuffle(restarts.begin(), restarts.end(), rng);
  std::size_t cursor = 0;

  Sequence out;
  out.reserve(shard.size());
  std::vector<std::uint8_t> visited(n, 0);
  std::vector<NodeId> queue;
  queue.reserve(n);

  auto run_from = [&](NodeId start) {
    queue.clear();
    queue.push_back(start);
    visited[start] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      NodeId u = queue[head];
      if (member[u]) out.push_back(u);
      for (NodeId w : g.neighbors(u)) {
        if (!visited[w]) {
          visited[w] = 1;
          queue.push_back(w);
        }
      }
    }
  };

  run_from(root);
  while (out.size() < shard.size()) {
    while (cursor < restarts.size() && visited[restarts[cursor]]) ++cursor;
    if (cursor == restarts.size()) break;
    run_from(restarts[cursor]);
  }
  return out;
}

std::vector<Sequence> generate_bfs_sequences(const Graph& g, std::uint32_t num_sequences, std::uint64_t seed) {
  auto training = g.training_nodes();
  if (training.empty()) throw Error("training set is empty");
  if (num_sequences < 1) throw Error("number of sequences must be >= 1");
  if (num_sequences > training.size()) throw Error("more sequences than training nodes");

  std::vector<Sequence> seqs;
  seqs.reserve(num_sequences);
  const std::size_t total = training.size();
  for (std::uint32_t s = 0; s < num_sequences; ++s) {
    const std::size_t lo = total * s / num_sequences;
    const std::size_t hi = total * (s + 1) / num_sequences;
    auto shard = training.subspan(lo, hi - lo);
    Rng rng(mix_seed(seed, s));
    NodeId root = shard[uniform_below(rng, shard.size())];
    seqs.push_back(bfs_training_order(g, shard, root, mix_seed(seed, 0x10000 + s)));
  }
  return seqs;
}

Sequence rotate_sequence(std::span<const NodeId> seq, std::size_t r) {
  Sequence out(seq.begin(), seq.end());
  if (!out.empty()) {
    std::rotate(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(r % out.size()), out.end());
  }
  return out;
}

Sequence random_shift(std::span<const NodeId> seq, std::uint64_t seed) {
  if (seq.empty()) return {};
  Rng rng(mix_seed(seed, 0x5f1f7));
  return rotate_sequence(seq, uniform_below(rng, seq.size()));
}

BatchSchedule form_batches(std::span<const Sequence> seqs, std::uint32_t batch_size) {
  if (batch_size < 1) throw Error("batch size must be >= 1");
  BatchSchedule schedule;
  schedule.batch_size = batch_size;
  std::vector<std::size_t> pos(seqs.size(), 0);
  std::vector<std::size_t> live(seqs.size());
  std::iota(live.begin(), live.end(), std::size_t{0});

  std::vector<NodeId> batch;
  batch.reserve(batch_size);
  while (!live.empty()) {
    std::size_t kept = 0;
    for (std::size_t s : live) {
      batch.push_back(seqs[s][pos[s]++]);
      if (batch.size() == batch_size) {
        schedule.batches.push_back(std::move(batch));
        batch = {};
        batch.reserve(batch_size);
      }
      if (pos[s] < seqs[s].size()) live[kept++] = s;
    }
    live.resize(kept);
  }
  if (!batch.empty()) schedule.batches.push_back(std::move(batch));
  return schedule;
}

BatchSchedule proximity_schedule(const Graph& g, std::uint32_t num_sequences, std::uint32_t batch_size,
                                 std::uint64_t seed) {
  auto seqs = generate_bfs_sequences(g, num_sequences, seed);
  for (std::size_t i = 0; i < seqs.size(); ++i) seqs[i] = random_shift(seqs[i], mix_seed(seed, 0x20000 + i));
  auto schedule = form_batches(seqs, batch_size);
  schedule.policy = "proximity";
  return schedule;
}

BatchSchedule random_shuffle_schedule(const Graph& g, std::uint32_t batch_size, std::uint64_t seed) {
  if (batch_size < 1) throw Error("batch size must be >= 1");
  Sequence order(g.training_nodes().begin(), g.training_nodes().end());
  Rng rng(mix_seed(seed, 0x5417));
  std::shuffle(order.begin(), order.end(), rng);
  BatchSchedule schedule;
  schedule.batch_size = batch_size;
  schedule.policy = "random";
  for (std::size_t i = 0; i < order.size(); i += batch_size) {
    auto end = std::min(order.size(), i + batch_size);
    schedule.batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                                  order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return schedule;
}

ShufflingErrorReport shuffling_error(const BatchSchedule& schedule, std::span<const Label> labels) {
  auto label_of = [&](NodeId v) {
    if (v >= labels.size() || labels[v] < 0) throw Error("node " + std::to_string(v) + " has no label");
    return static_cast<std::size_t>(labels[v]);
  };
  std::vector<double> global;
  std::size_t total = 0;
  for (const auto& batch : schedule.batches) {
    for (NodeId v : batch) {
      auto l = label_of(v);
      if (l >= global.size()) global.resize(l + 1, 0.0);
      global[l] += 1.0;
      ++total;
    }
  }
  ShufflingErrorReport report;
  if (total == 0) return report;
  for (auto& x : global) x /= static_cast<double>(total);

  std::vector<double> counts(global.size());
  double full_sum = 0.0, all_sum = 0.0;
  std::size_t full = 0;
  for (const auto& batch : schedule.batches) {
    std::fill(counts.begin(), counts.end(), 0.0);
    for (NodeId v : batch) counts[label_of(v)] += 1.0;
    double tv = 0.0;
    for (std::size_t l = 0; l < global.size(); ++l) {
      tv += std::abs(counts[l] / static_cast<double>(batch.size()) - global[l]);
    }
    tv *= 0.5;
    report.batch_tv.push_back(tv);
    report.max_tv = std::max(report.max_tv, tv);
    all_sum += tv;
    if (batch.size() == schedule.batch_size) {
      full_sum += tv;
      ++full;
    }
  }
  report.epsilon = full ? full_sum / static_cast<double>(full)
                        : all_sum / static_cast<double>(schedule.batches.size());
  return report;
}

double shuffling_threshold(std::uint32_t batch_size, std::uint32_t workers, std::size_t num_train) {
  if (num_train == 0) throw Error("training set is empty");
  return std::sqrt(static_cast<double>(batch_size) * workers) / static_cast<double>(num_train);
}

SequenceSelection select_num_sequences(const Graph& g, std::uint32_t batch_size, std::uint32_t workers,
                                       std::uint32_t max_sequences, std::uint64_t seed) {
  if (max_sequences < 1) throw Error("S_max must be >= 1");
  if (!g.has_labels()) throw Error("graph has no labels");
  const double threshold = shuffling_threshold(batch_size, workers, g.num_train());
  const auto limit = static_cast<std::uint32_t>(std::min<std::size_t>(max_sequences, g.num_train()));

  SequenceSelection selection;
  for (std::uint32_t s = 1; s <= limit; ++s) {
    auto schedule = proximity_schedule(g, s, batch_size, mix_seed(seed, s));
    auto report = shuffling_error(schedule, g.labels());
    report.threshold = threshold;
    report.num_sequences = s;
    selection.epsilon_by_s.push_back(report.epsilon);
    selection.num_sequences = s;
    selection.report = std::move(report);
    if (selection.report.epsilon <= threshold) {
      selection.threshold_met = true;
      break;
    }
  }
  return selection;
}

void save_schedule(const BatchSchedule& schedule, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "# policy " << (schedule.policy.empty() ? "unknown" : schedule.policy) << '\n';
  out << "# batch_size " << schedule.batch_size << '\n';
  for (const auto& batch : schedule.batches) {
    for (std::size_t i = 0; i < batch.size(); ++i) out << (i ? " " : "") << batch[i];
    out << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

BatchSchedule load_schedule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  BatchSchedule schedule;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto view = trim(line);
    if (view.empty()) continue;
    auto tokens = split_whitespace(view);
    if (view.front() == '#') {
      if (tokens.size() == 3 && tokens[1] == "policy") schedule.policy = std::string(tokens[2]);
      if (tokens.size() == 3 && tokens[1] == "batch_size") {
        std::from_chars(tokens[2].data(), tokens[2].data() + tokens[2].size(), schedule.batch_size);
      }
      continue;
    }
    std::vector<NodeId> batch;
    for (auto t : tokens) {
      NodeId v = 0;
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw ParseError(path.string(), line_no, "bad node ID \"" + std::string(t) + "\"");
      }
      batch.push_back(v);
    }
    schedule.batches.push_back(std::move(batch));
  }
  if (schedule.batch_size == 0 && !schedule.batches.empty()) {
    schedule.batch_size = static_cast<std::uint32_t>(schedule.batches.front().size());
  }
  return schedule;
}

}  // namespace gnnio
