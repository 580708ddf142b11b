#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "fappr/graph.hpp"

namespace fappr {

/// Exact PPR under the engine's walk semantics: every walk takes at least
/// one step, a walk that survives onto a sink restarts from its head, and a
/// source that is itself a sink keeps all of its mass.
struct ExactPpr {
  std::vector<std::vector<double>> scores;  // scores[s][t]
  double alpha = 0.0;
  double tolerance = 0.0;
  std::size_t iterations = 0;  // series terms summed for the slowest source

  double operator()(NodeId s, NodeId t) const { return scores[s][t]; }
};

inline constexpr std::size_t kExactPprMaxNodes = 100'000;

/// Sums alpha * (1 - alpha)^(k-1) * (arrival distribution after k steps)
/// until the surviving mass drops below `tolerance`; the leftover mass is
/// spread proportionally so each row sums to 1.
///
/// Throws ValidationError for n > kExactPprMaxNodes or bad parameters.
ExactPpr exact_ppr(const WeightedGraph& g, double alpha, double tolerance = 1e-9);

/// Single-source variant of exact_ppr.
std::vector<double> exact_ppr_row(const WeightedGraph& g, NodeId s, double alpha, double tolerance = 1e-9);

using WalkOutcome = std::pair<NodeId, bool>;  // (target, still walking)

inline constexpr std::uint64_t kEnumerationMaxPaths = 10'000'000;

/// Enumerates every walk of at most `depth` steps from s, path by path.
/// Mass ending at t within `depth` steps is reported as (t, false); mass
/// still walking after exactly `depth` steps is (t, true). A walk that
/// survives onto a sink before `depth` is reported as (sink, true) since it
/// would restart from there.
///
/// Throws ValidationError once more than kEnumerationMaxPaths paths would
/// be expanded, or when s is a sink.
std::map<WalkOutcome, double> enumerate_walks(const WeightedGraph& g, NodeId s, std::uint32_t depth, double alpha);

}  // namespace fappr
