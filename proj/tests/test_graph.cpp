#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "fappr/errors.hpp"
#include "fappr/graph.hpp"
#include "support/fixtures.hpp"

using namespace fappr;
using fappr::testing::graph_from_text;

TEST_CASE("routing probabilities normalize given weights") {
  auto g = graph_from_text("0\t1\t1\n0\t2\t3\n");
  CHECK(routing_probability(g, 0, 1) == 0.25);
  CHECK(routing_probability(g, 0, 2) == 0.75);
}

TEST_CASE("single uniform edge routes with probability one") {
  auto g = graph_from_text("0\t1\n", Weighting::uniform);
  CHECK(routing_probability(g, 0, 1) == 1.0);
}

TEST_CASE("equal weights split evenly") {
  auto g = graph_from_text("0 1 2.5\n0 2 2.5\n");
  CHECK(routing_probability(g, 0, 1) == 0.5);
  CHECK(routing_probability(g, 0, 2) == 0.5);
}

TEST_CASE("toy graph matches its worked example") {
  auto g = fappr::testing::toy_graph();
  CHECK(g.node_count() == 8);
  CHECK(g.edge_count() == 12);
  CHECK(routing_probability(g, 0, 3) == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(g.out_degree(0) == 6);
  CHECK(routing_probability(g, 2, 3) == 1.0);
  CHECK(routing_probability(g, 4, 3) == 1.0);
}

TEST_CASE("missing edge is a not-found error") {
  auto g = graph_from_text("0 1 1\n");
  CHECK_THROWS_AS(routing_probability(g, 1, 0), NotFoundError);
  CHECK_THROWS_AS(routing_probability(g, 0, 5), NotFoundError);
}

TEST_CASE("loader errors") {
  SUBCASE("malformed line reports its number") {
    try {
      graph_from_text("0 1 1\n# comment\n0 x 1\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("too many fields") { CHECK_THROWS_AS(graph_from_text("0 1 1 1\n"), ParseError); }
  SUBCASE("non-positive weight") {
    CHECK_THROWS_AS(graph_from_text("0 1 0\n"), ValidationError);
    CHECK_THROWS_AS(graph_from_text("0 1 -2\n"), ValidationError);
  }
  SUBCASE("given weighting needs a weight") { CHECK_THROWS_AS(graph_from_text("0 1\n"), ValidationError); }
}

TEST_CASE("duplicates, comments and sparse ids") {
  auto g = graph_from_text("# header\n\n10\t30\t1\n10 30 2\n10\t20\t1\n", Weighting::given);
  REQUIRE(g.node_count() == 3);
  CHECK(g.original_id(0) == 10);
  CHECK(g.original_id(1) == 20);
  CHECK(g.original_id(2) == 30);
  CHECK(g.edge_count() == 2);
  CHECK(routing_probability(g, 0, 2) == 0.75);
  CHECK(g.find(30) == NodeId{2});
  CHECK_FALSE(g.find(15).has_value());

  std::ostringstream map;
  write_id_map(g, map);
  CHECK(map.str() == "0\t10\n1\t20\n2\t30\n");
}

TEST_CASE("uniform and linear weighting assign one weight per distinct edge") {
  const std::string text = "0 3\n0 1\n0 2\n0 1\n";
  auto u = graph_from_text(text, Weighting::uniform);
  CHECK(routing_probability(u, 0, 1) == doctest::Approx(1.0 / 3));

  auto l = graph_from_text(text, Weighting::linear);
  // neighbor ranks by id: 1 -> 0, 2 -> 1, 3 -> 2; weights 1, 2, 3
  CHECK(routing_probability(l, 0, 1) == doctest::Approx(1.0 / 6));
  CHECK(routing_probability(l, 0, 2) == doctest::Approx(2.0 / 6));
  CHECK(routing_probability(l, 0, 3) == doctest::Approx(3.0 / 6));
}

TEST_CASE("loading is deterministic") {
  const std::string text = "5 1 0.3\n1 2 0.7\n2 5 1.1\n5 2 0.2\n";
  auto a = graph_from_text(text);
  auto b = graph_from_text(text);
  REQUIRE(a.node_count() == b.node_count());
  for (NodeId v = 0; v < a.node_count(); ++v) {
    CHECK(std::equal(a.neighbors(v).begin(), a.neighbors(v).end(), b.neighbors(v).begin(), b.neighbors(v).end()));
    CHECK(std::equal(a.weights(v).begin(), a.weights(v).end(), b.weights(v).begin(), b.weights(v).end()));
  }
}

TEST_CASE("routing probabilities sum to one on every non-sink") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = fappr::testing::random_graph(60, 12, 0.2, seed);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (g.is_sink(v)) continue;
      auto r = g.routing_probabilities(v);
      CHECK(std::abs(std::accumulate(r.begin(), r.end(), 0.0) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("degree stats: out-degrees [1,1,2,8]") {
  const std::vector<std::size_t> degrees{1, 1, 2, 8};
  auto s = degree_stats(degrees);
  CHECK(s.d_avg == 3.0);
  CHECK(s.d_max == 8);
  CHECK(s.small_nodes == std::vector<NodeId>{0, 1, 2});
  CHECK(s.large_nodes == std::vector<NodeId>{3});  // 8 > sqrt(8)
}

TEST_CASE("degree stats: regular degrees have no small nodes") {
  auto s = degree_stats(std::vector<std::size_t>{3, 3, 3, 3});
  CHECK(s.small_nodes.empty());
  CHECK(s.d_avg == 3.0);
}

TEST_CASE("degree stats: empty graph") {
  auto s = degree_stats(WeightedGraph{});
  CHECK(s.d_avg == 0.0);
  CHECK(s.small_nodes.empty());
  CHECK(s.large_nodes.empty());
}

TEST_CASE("degree stats: toy graph") {
  auto s = degree_stats(fappr::testing::toy_graph());
  CHECK(s.d_avg == 1.5);
  CHECK(s.d_max == 6);
  CHECK(s.small_nodes == std::vector<NodeId>{1, 2, 3, 4, 5, 6, 7});
  CHECK(s.large_nodes == std::vector<NodeId>{0});
}

TEST_CASE("degree stats agree with brute force") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto g = fappr::testing::random_graph(80, 20, 0.1, seed);
    auto s = degree_stats(g);
    std::size_t edges = 0;
    std::size_t dmax = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      edges += g.neighbors(v).size();
      dmax = std::max(dmax, g.neighbors(v).size());
    }
    const double avg = static_cast<double>(edges) / 80.0;
    std::vector<NodeId> small;
    std::vector<NodeId> large;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      const auto d = static_cast<double>(g.neighbors(v).size());
      if (d < avg) small.push_back(v);
      if (d * d > static_cast<double>(dmax)) large.push_back(v);
    }
    CHECK(s.small_nodes == small);
    CHECK(s.large_nodes == large);
  }
}

TEST_CASE("sinks") {
  CHECK(sinks(WeightedGraph{}).empty());
  CHECK(sinks(graph_from_text("0 1\n", Weighting::uniform)) == std::vector<NodeId>{1});
  // The toy graph's only node without out-edges is v1.
  CHECK(sinks(fappr::testing::toy_graph()) == std::vector<NodeId>{1});
}
