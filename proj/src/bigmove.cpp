#include "fappr/bigmove.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <thread>

#include "fappr/errors.hpp"

namespace fappr {

BigMoveTable::BigMoveTable(std::size_t node_count, std::vector<NodeId> nodes, std::vector<Entry> entries)
    : slot_(node_count, kNone), nodes_(std::move(nodes)), entries_(std::move(entries)) {
  if (nodes_.size() != entries_.size()) throw ValidationError("big-move nodes and entries differ in length");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i] >= node_count) throw ValidationError("big-move node out of range");
    if (entries_[i].moves.size() != entries_[i].sampler.size()) {
      throw ValidationError("big-move sampler does not match its move list");
    }
    slot_[nodes_[i]] = static_cast<std::uint32_t>(i);
  }
}

const BigMoveTable::Entry& BigMoveTable::entry(NodeId v) const {
  if (!contains(v)) throw NotFoundError("node has no big moves");
  return entries_[slot_[v]];
}

namespace {

using Mass = std::pair<NodeId, double>;

void aggregate(std::vector<Mass>& items) {
  std::stable_sort(items.begin(), items.end(), [](const Mass& a, const Mass& b) { return a.first < b.first; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (out > 0 && items[out - 1].first == items[i].first) {
      items[out - 1].second += items[i].second;
    } else {
      items[out++] = items[i];
    }
  }
  items.resize(out);
}

BigMoveTable::Entry expand_node(const WeightedGraph& g, NodeId v, const BigMoveOptions& opt) {
  std::vector<Mass> frontier;
  {
    auto nbrs = g.neighbors(v);
    auto r = g.routing_probabilities(v);
    for (std::size_t i = 0; i < nbrs.size(); ++i) frontier.emplace_back(nbrs[i], r[i]);
  }
  std::map<NodeId, double> arrived(frontier.begin(), frontier.end());
  std::map<NodeId, double> parked;  // frontier mass stopped on sinks
  std::size_t prev_arrived = 0;
  std::uint32_t depth = 1;

  auto frontier_size = [&] { return frontier.size() + parked.size(); };

  while (arrived.size() + frontier_size() < opt.threshold && prev_arrived < arrived.size()) {
    prev_arrived = arrived.size();
    std::vector<Mass> next;
    for (const auto& [u, mass] : frontier) {
      if (g.is_sink(u)) {
        parked[u] += mass;
        continue;
      }
      auto nbrs = g.neighbors(u);
      auto ws = g.weights(u);
      const double scale = mass * (1.0 - opt.alpha) / g.total_out_weight(u);
      for (std::size_t i = 0; i < nbrs.size(); ++i) next.emplace_back(nbrs[i], scale * ws[i]);
    }
    std::vector<Mass> merged = next;
    aggregate(merged);
    for (const auto& [t, mass] : merged) arrived[t] += mass;
    if (!opt.count_raw_frontier) next = std::move(merged);
    frontier = std::move(next);
    ++depth;
  }

  for (const auto& [u, mass] : frontier) parked[u] += mass;

  BigMoveTable::Entry entry;
  entry.depth = depth;
  for (const auto& [t, mass] : arrived) entry.moves.push_back({t, false, opt.alpha * mass});
  for (const auto& [t, mass] : parked) entry.moves.push_back({t, true, (1.0 - opt.alpha) * mass});

  std::vector<double> probs(entry.moves.size());
  std::transform(entry.moves.begin(), entry.moves.end(), probs.begin(),
                 [](const BigMove& m) { return m.probability; });
  entry.sampler = build_alias(probs);
  return entry;
}

}  // namespace

BigMoveTable precompute_big_moves(const WeightedGraph& g, std::span<const NodeId> small_nodes,
                                  const BigMoveOptions& options, unsigned workers) {
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  if (options.threshold == 0) throw ValidationError("big-move threshold must be positive");

  std::vector<NodeId> nodes;
  for (NodeId v : small_nodes) {
    if (v >= g.node_count()) throw ValidationError("small node out of range");
    if (!g.is_sink(v)) nodes.push_back(v);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  std::vector<BigMoveTable::Entry> entries(nodes.size());
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(nodes.size(), 1))));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < nodes.size(); i += workers) entries[i] = expand_node(g, nodes[i], options);
      });
    }
  }
  return BigMoveTable(g.node_count(), std::move(nodes), std::move(entries));
}

}  // namespace fappr
