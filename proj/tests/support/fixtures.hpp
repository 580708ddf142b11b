#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fappr/graph.hpp"

namespace fappr::testing {

inline std::string data_path(const std::string& name) { return std::string(FAPPR_TEST_DATA_DIR) + "/" + name; }

/// The 8-node, 12-edge toy graph; node k is v_k.
inline WeightedGraph toy_graph() {
  std::ifstream in(data_path("toy_graph.tsv"));
  return load_edge_list(in, Weighting::given);
}

inline WeightedGraph graph_from_text(const std::string& text, Weighting w = Weighting::given) {
  std::istringstream in(text);
  return load_edge_list(in, w);
}

/// Directed graph with Pareto-distributed out-degrees (exponent ~2.2) and
/// targets drawn with Zipf-like popularity. Every node has out-degree >= 1
/// and no self-loops, so there are no sinks.
inline WeightedGraph power_law_graph(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> popularity(n);
  for (std::size_t i = 0; i < n; ++i) popularity[i] = 1.0 / std::pow(static_cast<double>(i) + 1.0, 0.8);
  std::shuffle(popularity.begin(), popularity.end(), rng);
  std::discrete_distribution<std::size_t> pick(popularity.begin(), popularity.end());

  const std::size_t max_degree = std::max<std::size_t>(1, n / 10);
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    const double draw = std::pow(1.0 - unit(rng), -1.0 / 1.2);
    const auto degree = std::min<std::size_t>(max_degree, static_cast<std::size_t>(draw));
    for (std::size_t k = 0; k < std::max<std::size_t>(degree, 1); ++k) {
      std::size_t v = pick(rng);
      if (v == u) v = (u + 1) % n;
      edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), 1.0 + static_cast<double>((u + v) % 5)});
    }
  }
  return WeightedGraph::from_edges(n, std::move(edges));
}

/// Random graph for property tests; may contain sinks.
inline WeightedGraph random_graph(std::size_t n, std::size_t max_out, double sink_fraction, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> node(0, n - 1);
  std::uniform_int_distribution<std::size_t> deg(1, max_out);
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    if (unit(rng) < sink_fraction) continue;
    const std::size_t d = deg(rng);
    for (std::size_t k = 0; k < d; ++k) {
      edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(node(rng)), 0.1 + unit(rng)});
    }
  }
  return WeightedGraph::from_edges(n, std::move(edges));
}

/// Normalized positive random weights.
inline std::vector<double> random_distribution(std::size_t size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.01, 1.0);
  std::vector<double> w(size);
  double sum = 0.0;
  for (double& x : w) sum += (x = unit(rng));
  for (double& x : w) x /= sum;
  return w;
}

/// Reference O(|S|) sampler: the element with the largest z^(1/r) wins.
/// Independent of the alias code paths.
inline std::size_t naive_sample(const std::vector<double>& r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t best = 0;
  double best_key = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double key = std::log(unit(rng)) / r[i];
    if (key > best_key) {
      best_key = key;
      best = i;
    }
  }
  return best;
}

inline double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  double tv = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] - b[i]);
  return tv / 2.0;
}

}  // namespace fappr::testing
