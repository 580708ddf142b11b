#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fappr/alias.hpp"
#include "fappr/graph.hpp"

namespace fappr {

/// A precomputed multi-step move: the walk lands on `target` and either
/// ends there (`active == false`) or continues from it.
struct BigMove {
  NodeId target;
  bool active;
  double probability;

  friend bool operator==(const BigMove&, const BigMove&) = default;
};

struct BigMoveOptions {
  /// Stop expanding once |B| + |F| reaches this many entries.
  std::uint32_t threshold = 16;
  double alpha = 0.5;
  /// Count the frontier before aggregation by target in the size test.
  bool count_raw_frontier = false;
};

/// Per-node big moves with an alias table over each node's move list.
class BigMoveTable {
 public:
  struct Entry {
    std::vector<BigMove> moves;  // terminated moves by target, then active moves by target
    AliasTable sampler;          // over move indices
    std::uint32_t depth = 0;     // longest walk length the moves cover

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  BigMoveTable() = default;
  BigMoveTable(std::size_t node_count, std::vector<NodeId> nodes, std::vector<Entry> entries);

  bool contains(NodeId v) const { return v < slot_.size() && slot_[v] != kNone; }
  /// Throws NotFoundError when v has no moves.
  const Entry& entry(NodeId v) const;
  std::span<const BigMove> moves(NodeId v) const { return entry(v).moves; }
  std::uint32_t depth(NodeId v) const { return entry(v).depth; }

  const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
  std::size_t node_count() const noexcept { return slot_.size(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  friend bool operator==(const BigMoveTable&, const BigMoveTable&) = default;

 private:
  static constexpr std::uint32_t kNone = 0xFFFFFFFFu;

  std::vector<std::uint32_t> slot_;
  std::vector<NodeId> nodes_;
  std::vector<Entry> entries_;
};

/// Expands each node of `small_nodes` breadth-first: B accumulates the mass
/// of arriving at each target within the expansion depth, F holds the mass
/// still walking at the frontier. Expansion stops when |B| + |F| reaches the
/// threshold or an iteration adds no new target to B. Moves are
/// <t, ended, alpha * B(t)> and <t, active, (1 - alpha) * F(t)>.
///
/// Frontier mass sitting on a sink is not expanded further; it stays as an
/// active move onto the sink so the engine's restart rule applies to it.
///
/// Sinks in `small_nodes` are skipped. Work is split over `workers` threads.
/// Throws ValidationError when alpha is outside (0, 1) or threshold is 0.
BigMoveTable precompute_big_moves(const WeightedGraph& g, std::span<const NodeId> small_nodes,
                                  const BigMoveOptions& options, unsigned workers = 1);

/// Throws NotFoundError when v has no moves.
template <RandomStream G>
const BigMove& sample_big_move(const BigMoveTable& table, NodeId v, G& rng) {
  const auto& e = table.entry(v);
  return e.moves[e.sampler.sample_slot(rng)];
}

}  // namespace fappr
