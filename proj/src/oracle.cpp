#include "fappr/oracle.hpp"

#include <numeric>

#include "fappr/errors.hpp"

namespace fappr {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
}

std::vector<double> row_impl(const WeightedGraph& g, NodeId s, double alpha, double tolerance, std::size_t& terms) {
  const std::size_t n = g.node_count();
  std::vector<double> pi(n, 0.0);
  terms = 0;
  if (g.is_sink(s)) {
    pi[s] = 1.0;
    return pi;
  }
  std::vector<double> at(n, 0.0);
  std::vector<double> arrive(n, 0.0);
  at[s] = 1.0;
  double surviving = 1.0;
  while (surviving >= tolerance) {
    std::fill(arrive.begin(), arrive.end(), 0.0);
    for (NodeId u = 0; u < n; ++u) {
      if (at[u] == 0.0) continue;
      auto nbrs = g.neighbors(u);
      auto ws = g.weights(u);
      const double scale = at[u] / g.total_out_weight(u);
      for (std::size_t i = 0; i < nbrs.size(); ++i) arrive[nbrs[i]] += scale * ws[i];
    }
    surviving = 0.0;
    for (NodeId t = 0; t < n; ++t) {
      pi[t] += alpha * arrive[t];
      at[t] = (1.0 - alpha) * arrive[t];
    }
    for (NodeId t = 0; t < n; ++t) {
      if (g.is_sink(t) && at[t] != 0.0) {
        at[s] += at[t];
        at[t] = 0.0;
      }
    }
    for (double m : at) surviving += m;
    ++terms;
  }
  const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
  for (double& p : pi) p /= total;
  return pi;
}

}  // namespace

std::vector<double> exact_ppr_row(const WeightedGraph& g, NodeId s, double alpha, double tolerance) {
  check_alpha(alpha);
  if (!(tolerance > 0.0 && tolerance < 1.0)) throw ValidationError("tolerance must lie in (0, 1)");
  if (s >= g.node_count()) throw ValidationError("source out of range");
  std::size_t terms = 0;
  return row_impl(g, s, alpha, tolerance, terms);
}

ExactPpr exact_ppr(const WeightedGraph& g, double alpha, double tolerance) {
  check_alpha(alpha);
  if (!(tolerance > 0.0 && tolerance < 1.0)) throw ValidationError("tolerance must lie in (0, 1)");
  if (g.node_count() > kExactPprMaxNodes) {
    throw ValidationError("graph has " + std::to_string(g.node_count()) + " nodes; exact PPR is limited to " +
                          std::to_string(kExactPprMaxNodes));
  }
  ExactPpr out;
  out.alpha = alpha;
  out.tolerance = tolerance;
  out.scores.reserve(g.node_count());
  for (NodeId s = 0; s < g.node_count(); ++s) {
    std::size_t terms = 0;
    out.scores.push_back(row_impl(g, s, alpha, tolerance, terms));
    out.iterations = std::max(out.iterations, terms);
  }
  return out;
}

namespace {

struct Enumerator {
  const WeightedGraph& g;
  double alpha;
  std::uint32_t depth;
  std::map<WalkOutcome, double> out;
  std::uint64_t expanded = 0;

  // `mass` is the probability of the path reaching u at step `step` alive.
  void walk(NodeId u, std::uint32_t step, double mass) {
    auto nbrs = g.neighbors(u);
    auto ws = g.weights(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      if (++expanded > kEnumerationMaxPaths) throw ValidationError("walk enumeration exceeds the path limit");
      const NodeId t = nbrs[i];
      const double arrive = mass * ws[i] / g.total_out_weight(u);
      out[{t, false}] += alpha * arrive;
      const double alive = (1.0 - alpha) * arrive;
      if (step + 1 == depth || g.is_sink(t)) {
        out[{t, true}] += alive;
      } else {
        walk(t, step + 1, alive);
      }
    }
  }
};

}  // namespace

std::map<WalkOutcome, double> enumerate_walks(const WeightedGraph& g, NodeId s, std::uint32_t depth, double alpha) {
  check_alpha(alpha);
  if (s >= g.node_count()) throw ValidationError("source out of range");
  if (g.is_sink(s)) throw ValidationError("cannot enumerate walks from a sink");
  if (depth == 0) throw ValidationError("depth must be positive");
  Enumerator e{g, alpha, depth, {}, 0};
  e.walk(s, 0, 1.0);
  return std::move(e.out);
}

}  // namespace fappr
