#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fappr/graph.hpp"

namespace fappr {

/// Sparse endpoint counts per source; pi_hat(s,t) = count(s,t) / omega.
class EstimateStore {
 public:
  EstimateStore() = default;
  EstimateStore(std::size_t node_count, std::uint64_t omega) : omega_(omega), counts_(node_count) {}

  std::uint64_t omega() const noexcept { return omega_; }
  std::size_t node_count() const noexcept { return counts_.size(); }

  void record(NodeId s, NodeId t, std::uint64_t times = 1) { counts_[s][t] += times; }
  std::uint64_t count(NodeId s, NodeId t) const;
  std::uint64_t total(NodeId s) const;

  /// count(s,t) / omega; 0 for pairs never recorded.
  double finalize(NodeId s, NodeId t) const;

  /// Adds every count of `other` into this store.
  void merge(const EstimateStore& other);

  /// Targets of s with their counts, ascending by target id.
  std::vector<std::pair<NodeId, std::uint64_t>> row(NodeId s) const;

  friend bool operator==(const EstimateStore& a, const EstimateStore& b) {
    return a.omega_ == b.omega_ && a.counts_ == b.counts_;
  }

 private:
  std::uint64_t omega_ = 0;
  std::vector<std::unordered_map<NodeId, std::uint64_t>> counts_;
};

/// Up to k targets of s by descending pi_hat, ties by ascending id.
std::vector<std::pair<NodeId, double>> top_k(const EstimateStore& store, NodeId s, std::size_t k);

/// Scores keyed by original node ids, as read back from a result file.
using ScoreTable = std::map<std::int64_t, std::map<std::int64_t, double>>;

/// Writes `source<TAB>target<TAB>pi_hat` lines using the graph's original
/// ids, sorted by source, descending pi_hat, then target. Values carry 9
/// significant digits.
void write_result_tsv(const EstimateStore& store, const WeightedGraph& g, std::ostream& out);

/// Same layout for an arbitrary dense score matrix (row per source); zero
/// entries are skipped.
void write_score_tsv(const std::vector<std::vector<double>>& scores, const WeightedGraph& g, std::ostream& out);

/// Parses a result file. Throws ParseError on malformed lines.
ScoreTable read_score_tsv(std::istream& in);

}  // namespace fappr
