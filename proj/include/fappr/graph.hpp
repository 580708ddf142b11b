#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace fappr {

using NodeId = std::uint32_t;

enum class Weighting { given, uniform, linear };

struct Edge {
  NodeId src;
  NodeId dst;
  double weight;
};

/// Immutable directed graph in CSR form with positive edge weights.
///
/// Node ids are dense in [0, n). The original (possibly sparse) ids from the
/// input are kept in ascending order, so dense id order equals original id
/// order.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Builds from an edge list over dense ids. Duplicate edges are merged by
  /// summing weights; adjacency lists are sorted by target id.
  /// Throws ValidationError on a non-positive weight or an id >= n.
  static WeightedGraph from_edges(std::size_t n, std::vector<Edge> edges,
                                  std::vector<std::int64_t> original_ids = {});

  std::size_t node_count() const noexcept { return totals_.size(); }
  std::size_t edge_count() const noexcept { return targets_.size(); }

  std::size_t out_degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool is_sink(NodeId v) const { return out_degree(v) == 0; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {targets_.data() + offsets_[v], out_degree(v)};
  }
  std::span<const double> weights(NodeId v) const {
    return {weights_.data() + offsets_[v], out_degree(v)};
  }
  /// 0 for sinks.
  double total_out_weight(NodeId v) const { return totals_[v]; }

  /// r(v, .) over neighbors(v), in adjacency order.
  std::vector<double> routing_probabilities(NodeId v) const;

  std::int64_t original_id(NodeId v) const { return original_ids_[v]; }
  std::optional<NodeId> find(std::int64_t original) const;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
  std::vector<double> weights_;
  std::vector<double> totals_;
  std::vector<std::int64_t> original_ids_;
};

/// Reads `src dst [weight]` lines (tab or space separated, `#` comments).
/// Input ids are densified in ascending numeric order.
///
/// `uniform` and `linear` assign weights after duplicate edges are merged;
/// `linear` gives edge <u,v> the weight 1 + rank of v among u's neighbors.
WeightedGraph load_edge_list(std::istream& in, Weighting weighting);

/// r(s,t) = w(<s,t>) / total_out_weight(s). Throws NotFoundError if the edge
/// is absent.
double routing_probability(const WeightedGraph& g, NodeId s, NodeId t);

struct DegreeStats {
  double d_avg = 0.0;
  std::size_t d_max = 0;
  std::vector<NodeId> small_nodes;  // out-degree < d_avg
  std::vector<NodeId> large_nodes;  // out-degree > sqrt(d_max)
};

DegreeStats degree_stats(const WeightedGraph& g);

/// Same classification from a plain out-degree sequence (index = node id).
DegreeStats degree_stats(std::span<const std::size_t> out_degrees);

std::vector<NodeId> sinks(const WeightedGraph& g);

/// TSV `internal_id<TAB>original_id`, one line per node.
void write_id_map(const WeightedGraph& g, std::ostream& out);

}  // namespace fappr
