#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "fappr/alias.hpp"
#include "fappr/bigmove.hpp"
#include "fappr/estimate.hpp"
#include "fappr/graph.hpp"
#include "fappr/random.hpp"

namespace fappr {

/// A walk in flight: only its head and current tail are kept. `walk` is the
/// walk's index among the walks of its head and keys its random stream.
struct WalkRecord {
  NodeId head;
  NodeId tail;
  std::uint32_t walk;
  bool terminated = false;

  friend bool operator==(const WalkRecord&, const WalkRecord&) = default;
};

struct RunConfig {
  double epsilon = 0.5;
  double delta = 0.5;
  /// 0 selects 1/n.
  double failure_prob = 0.0;
  double alpha = 0.5;
  double omega_constant = 3.0;
  /// Walks per source; derived from epsilon, delta and failure_prob if unset.
  std::optional<std::uint64_t> omega;
  /// Walks per source per pipeline; derived from the memory budget if unset.
  std::optional<std::uint64_t> gamma;
  std::uint32_t tree_block_size = 4096;
  std::uint32_t big_move_threshold = 16;
  std::uint64_t memory_budget = std::uint64_t{256} << 20;
  std::uint64_t walk_cost = sizeof(WalkRecord);
  std::uint64_t seed = 0;
  bool big_moves = true;
  bool alias_trees = true;
  unsigned workers = 1;

  /// Throws ValidationError on out-of-range values.
  void validate() const;
};

/// ceil(c * ln(1/p_f) / (eps^2 * delta)).
std::uint64_t compute_omega(double epsilon, double delta, double failure_prob, double constant = 3.0);

/// max(1, floor(alpha * M / (n * c))), capped at omega. Keeps the expected
/// number of walks in flight, n * gamma / alpha, within the budget M.
std::uint64_t autotune_gamma(std::size_t n, double alpha, std::uint64_t memory_budget, std::uint64_t walk_cost,
                             std::uint64_t omega = UINT64_MAX);

enum class NodeClass : std::uint8_t { sink, small, medium, large };

struct SamplerOptions {
  double alpha = 0.5;
  std::uint32_t tree_block_size = 4096;
  std::uint32_t big_move_threshold = 16;
  bool big_moves = true;
  bool alias_trees = true;
  unsigned workers = 1;
};

/// Per-node sampling structures: big moves for small nodes, an alias tree
/// for large nodes, a flat alias table for everything else. Large wins when
/// a node is both small and large.
class Samplers {
 public:
  Samplers() = default;
  static Samplers build(const WeightedGraph& g, const SamplerOptions& options);

  NodeClass node_class(NodeId v) const { return class_[v]; }
  const AliasTable& table(NodeId v) const { return tables_[slot_[v]]; }
  const AliasTree& tree(NodeId v) const { return trees_[slot_[v]]; }
  const BigMoveTable& big_moves() const noexcept { return big_moves_; }
  std::size_t node_count() const noexcept { return class_.size(); }

  /// Next tail for a medium or large node.
  template <RandomStream G>
  NodeId sample_neighbor(NodeId u, G& rng) const {
    return class_[u] == NodeClass::large ? trees_[slot_[u]].sample(rng) : sample_alias(tables_[slot_[u]], rng);
  }

 private:
  std::vector<NodeClass> class_;
  std::vector<std::uint32_t> slot_;
  std::vector<AliasTable> tables_;
  std::vector<AliasTree> trees_;
  BigMoveTable big_moves_;
};

struct StepCounters {
  std::uint64_t samples = 0;    // sampler invocations (alias, tree or big move)
  std::uint64_t big_moves = 0;  // of which big moves
  std::uint64_t restarts = 0;   // walks sent back to their head from a sink

  StepCounters& operator+=(const StepCounters& o) {
    samples += o.samples;
    big_moves += o.big_moves;
    restarts += o.restarts;
    return *this;
  }
};

/// Advances one walk by one round using the stream keyed by
/// (seed, head, walk, round).
///
/// - tail is a sink: tail goes back to head; no coin.
/// - tail is small: a big move is taken; the walk ends iff the move ends.
/// - otherwise: one neighbor is drawn, then the walk ends with probability alpha.
void extend_walk(WalkRecord& walk, const WeightedGraph& g, const Samplers& samplers, double alpha,
                 std::uint64_t seed, std::uint32_t round, StepCounters& counters);

struct RoundOutput {
  std::vector<WalkRecord> active;
  std::vector<WalkRecord> terminated;
  StepCounters counters;
};

/// One bulk-synchronous round over `walks`. Output preserves input order.
RoundOutput extend_round(std::span<const WalkRecord> walks, const WeightedGraph& g, const Samplers& samplers,
                         double alpha, std::uint64_t seed, std::uint32_t round);

/// Appends min(gamma, remaining) fresh walks <v,v> for every node v not
/// flagged in `skip`, then lowers `remaining` and advances `next_walk` by
/// that amount. Returns the number of walks per node.
std::uint64_t seed_pipeline(std::size_t n, std::uint64_t gamma, std::uint64_t& remaining, std::uint64_t& next_walk,
                            std::vector<WalkRecord>& out, const std::vector<bool>& skip = {});

struct RoundTelemetry {
  std::uint64_t round = 0;
  std::uint64_t active = 0;      // walks extended this round (s_i)
  std::uint64_t terminated = 0;  // walks that ended this round
  std::uint64_t pipelines_started = 0;
  std::uint64_t peak_bytes = 0;  // max over rounds so far of active * walk_cost
  bool over_budget = false;      // active * walk_cost exceeded the budget by more than 10%
};

struct RunResult {
  EstimateStore estimates;
  std::vector<RoundTelemetry> telemetry;
  std::uint64_t omega = 0;
  std::uint64_t gamma = 0;
  std::uint64_t pipelines = 0;
  std::uint64_t peak_active = 0;
  StepCounters counters;
};

/// Pipelined Monte Carlo estimation of all-pairs PPR.
///
/// Each round first seeds a new pipeline of gamma walks per node while the
/// per-node budget omega lasts, then extends every active walk once and
/// moves finished walks into the estimate. Sources that are sinks never
/// move, so they get pi_hat(s,s) = 1 without simulation.
///
/// Results depend only on the graph and config, not on `workers`.
RunResult run_fappr(const WeightedGraph& g, const RunConfig& cfg);
RunResult run_fappr(const WeightedGraph& g, const RunConfig& cfg, const Samplers& samplers);

/// TSV `round active terminated pipelines_started peak_bytes_est` with a
/// `#` header line.
void write_telemetry(std::span<const RoundTelemetry> telemetry, std::ostream& out);

}  // namespace fappr
