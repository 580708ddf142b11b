#include "fappr/engine.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "fappr/errors.hpp"

namespace fappr {

namespace {

bool open_unit(double x) { return x > 0.0 && x < 1.0; }

// Below this many walks a round runs on the calling thread.
constexpr std::size_t kMinWalksPerWorker = 4096;

}  // namespace

void RunConfig::validate() const {
  if (!open_unit(epsilon)) throw ValidationError("epsilon must lie in (0, 1)");
  if (!open_unit(delta)) throw ValidationError("delta must lie in (0, 1)");
  if (failure_prob != 0.0 && !open_unit(failure_prob)) throw ValidationError("failure probability must lie in (0, 1)");
  if (!open_unit(alpha)) throw ValidationError("alpha must lie in (0, 1)");
  if (!(omega_constant > 0.0)) throw ValidationError("omega constant must be positive");
  if (omega && *omega == 0) throw ValidationError("omega must be positive");
  if (gamma && *gamma == 0) throw ValidationError("gamma must be positive");
  if (omega && gamma && *gamma > *omega) throw ValidationError("gamma must not exceed omega");
  if (omega && *omega > UINT32_MAX) throw ValidationError("omega must fit in 32 bits");
  if (tree_block_size < 2) throw ValidationError("alias tree block size must be at least 2");
  if (big_move_threshold == 0) throw ValidationError("big-move threshold must be positive");
  if (memory_budget == 0) throw ValidationError("memory budget must be positive");
  if (walk_cost == 0) throw ValidationError("walk cost must be positive");
}

std::uint64_t compute_omega(double epsilon, double delta, double failure_prob, double constant) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ValidationError("epsilon must lie in (0, 1]");
  if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("delta must lie in (0, 1]");
  if (!open_unit(failure_prob)) throw ValidationError("failure probability must lie in (0, 1)");
  if (!(constant > 0.0)) throw ValidationError("omega constant must be positive");
  const double raw = constant * std::log(1.0 / failure_prob) / (epsilon * epsilon * delta);
  // Absorb last-bit noise so exact integers (e.g. ln e = 1) are not bumped up.
  const double walks = std::ceil(raw * (1.0 - 1e-12));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(walks));
}

std::uint64_t autotune_gamma(std::size_t n, double alpha, std::uint64_t memory_budget, std::uint64_t walk_cost,
                             std::uint64_t omega) {
  if (n == 0 || walk_cost == 0 || memory_budget == 0) throw ValidationError("n, M and c must be positive");
  if (!open_unit(alpha)) throw ValidationError("alpha must lie in (0, 1)");
  const double bound = alpha * static_cast<double>(memory_budget) / (static_cast<double>(n) * static_cast<double>(walk_cost));
  const auto gamma = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(bound)));
  return std::min(gamma, std::max<std::uint64_t>(omega, 1));
}

Samplers Samplers::build(const WeightedGraph& g, const SamplerOptions& options) {
  const std::size_t n = g.node_count();
  const DegreeStats stats = degree_stats(g);

  std::vector<bool> in_large(n, false);
  std::vector<bool> in_small(n, false);
  for (NodeId v : stats.large_nodes) in_large[v] = true;
  for (NodeId v : stats.small_nodes) in_small[v] = true;

  Samplers s;
  s.class_.assign(n, NodeClass::medium);
  s.slot_.assign(n, 0);
  std::vector<NodeId> small;
  for (NodeId v = 0; v < n; ++v) {
    if (g.is_sink(v)) {
      s.class_[v] = NodeClass::sink;
    } else if (in_large[v]) {
      s.class_[v] = options.alias_trees ? NodeClass::large : NodeClass::medium;
    } else if (in_small[v] && options.big_moves) {
      s.class_[v] = NodeClass::small;
      small.push_back(v);
    }
  }

  for (NodeId v = 0; v < n; ++v) {
    if (s.class_[v] == NodeClass::medium) {
      s.slot_[v] = static_cast<std::uint32_t>(s.tables_.size());
      s.tables_.push_back(build_alias(g.neighbors(v), g.routing_probabilities(v)));
    } else if (s.class_[v] == NodeClass::large) {
      s.slot_[v] = static_cast<std::uint32_t>(s.trees_.size());
      s.trees_.push_back(build_alias_tree(g.neighbors(v), g.routing_probabilities(v), options.tree_block_size));
    }
  }

  BigMoveOptions bm;
  bm.alpha = options.alpha;
  bm.threshold = options.big_move_threshold;
  s.big_moves_ = precompute_big_moves(g, small, bm, options.workers);
  return s;
}

void extend_walk(WalkRecord& walk, const WeightedGraph& g, const Samplers& samplers, double alpha,
                 std::uint64_t seed, std::uint32_t round, StepCounters& counters) {
  const NodeId u = walk.tail;
  if (g.is_sink(u)) {
    walk.tail = walk.head;
    ++counters.restarts;
    return;
  }
  switch (samplers.node_class(u)) {
    case NodeClass::sink:
      return;
    case NodeClass::small: {
      WalkStream rng(seed, walk.head, walk.walk, round);
      const BigMove& move = sample_big_move(samplers.big_moves(), u, rng);
      walk.tail = move.target;
      walk.terminated = !move.active;
      ++counters.samples;
      ++counters.big_moves;
      return;
    }
    case NodeClass::medium:
    case NodeClass::large: {
      WalkStream rng(seed, walk.head, walk.walk, round);
      walk.tail = samplers.sample_neighbor(u, rng);
      walk.terminated = uniform01(rng) < alpha;
      ++counters.samples;
      return;
    }
  }
}

RoundOutput extend_round(std::span<const WalkRecord> walks, const WeightedGraph& g, const Samplers& samplers,
                         double alpha, std::uint64_t seed, std::uint32_t round) {
  RoundOutput out;
  out.active.reserve(walks.size());
  for (WalkRecord w : walks) {
    extend_walk(w, g, samplers, alpha, seed, round, out.counters);
    (w.terminated ? out.terminated : out.active).push_back(w);
  }
  return out;
}

std::uint64_t seed_pipeline(std::size_t n, std::uint64_t gamma, std::uint64_t& remaining, std::uint64_t& next_walk,
                            std::vector<WalkRecord>& out, const std::vector<bool>& skip) {
  const std::uint64_t batch = std::min(gamma, remaining);
  for (NodeId v = 0; v < n; ++v) {
    if (!skip.empty() && skip[v]) continue;
    for (std::uint64_t i = 0; i < batch; ++i) {
      out.push_back({v, v, static_cast<std::uint32_t>(next_walk + i), false});
    }
  }
  remaining -= batch;
  next_walk += batch;
  return batch;
}

RunResult run_fappr(const WeightedGraph& g, const RunConfig& cfg) {
  cfg.validate();
  SamplerOptions options;
  options.alpha = cfg.alpha;
  options.tree_block_size = cfg.tree_block_size;
  options.big_move_threshold = cfg.big_move_threshold;
  options.big_moves = cfg.big_moves;
  options.alias_trees = cfg.alias_trees;
  options.workers = std::max(1U, cfg.workers);
  return run_fappr(g, cfg, Samplers::build(g, options));
}

RunResult run_fappr(const WeightedGraph& g, const RunConfig& cfg, const Samplers& samplers) {
  cfg.validate();
  const std::size_t n = g.node_count();
  if (samplers.node_count() != n) throw ValidationError("samplers were built for a different graph");

  RunResult result;
  const double pf = cfg.failure_prob > 0.0 ? cfg.failure_prob : 1.0 / static_cast<double>(std::max<std::size_t>(n, 2));
  result.omega = cfg.omega ? *cfg.omega : compute_omega(cfg.epsilon, cfg.delta, pf, cfg.omega_constant);
  if (result.omega > UINT32_MAX) throw ValidationError("omega must fit in 32 bits");
  result.gamma = cfg.gamma ? std::min(*cfg.gamma, result.omega)
                           : autotune_gamma(std::max<std::size_t>(n, 1), cfg.alpha, cfg.memory_budget, cfg.walk_cost,
                                            result.omega);
  result.estimates = EstimateStore(n, result.omega);

  std::vector<bool> pinned(n, false);
  std::size_t simulated = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (g.is_sink(v)) {
      pinned[v] = true;
      result.estimates.record(v, v, result.omega);
    } else {
      ++simulated;
    }
  }

  const unsigned workers = std::max(1U, cfg.workers);
  std::uint64_t remaining = simulated > 0 ? result.omega : 0;
  std::uint64_t next_walk = 0;
  std::uint64_t peak_bytes = 0;
  std::vector<WalkRecord> active;

  for (std::uint32_t round = 1; !active.empty() || remaining > 0; ++round) {
    if (remaining > 0) {
      seed_pipeline(n, result.gamma, remaining, next_walk, active, pinned);
      ++result.pipelines;
    }

    RoundTelemetry tel;
    tel.round = round;
    tel.active = active.size();
    tel.pipelines_started = result.pipelines;
    const std::uint64_t bytes = tel.active * cfg.walk_cost;
    peak_bytes = std::max(peak_bytes, bytes);
    tel.peak_bytes = peak_bytes;
    tel.over_budget = static_cast<double>(bytes) > 1.10 * static_cast<double>(cfg.memory_budget);
    result.peak_active = std::max<std::uint64_t>(result.peak_active, tel.active);

    const std::size_t chunks =
        std::clamp<std::size_t>(active.size() / kMinWalksPerWorker, 1, static_cast<std::size_t>(workers));
    std::vector<RoundOutput> parts(chunks);
    const std::span<const WalkRecord> all(active);
    auto run_chunk = [&](std::size_t c) {
      const std::size_t begin = all.size() * c / chunks;
      const std::size_t end = all.size() * (c + 1) / chunks;
      parts[c] = extend_round(all.subspan(begin, end - begin), g, samplers, cfg.alpha, cfg.seed, round);
    };
    if (chunks == 1) {
      run_chunk(0);
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t c = 0; c < chunks; ++c) pool.emplace_back(run_chunk, c);
    }

    std::vector<WalkRecord> next;
    std::size_t total_active = 0;
    for (const RoundOutput& p : parts) total_active += p.active.size();
    next.reserve(total_active);
    for (RoundOutput& p : parts) {
      next.insert(next.end(), p.active.begin(), p.active.end());
      for (const WalkRecord& w : p.terminated) result.estimates.record(w.head, w.tail);
      tel.terminated += p.terminated.size();
      result.counters += p.counters;
    }
    active = std::move(next);
    result.telemetry.push_back(tel);
  }
  return result;
}

void write_telemetry(std::span<const RoundTelemetry> telemetry, std::ostream& out) {
  out << "#round\tactive\tterminated\tpipelines_started\tpeak_bytes_est\n";
  for (const RoundTelemetry& t : telemetry) {
    out << t.round << '\t' << t.active << '\t' << t.terminated << '\t' << t.pipelines_started << '\t'
        << t.peak_bytes << '\n';
  }
}

}  // namespace fappr
