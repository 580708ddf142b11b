#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "fappr/bigmove.hpp"
#include "fappr/errors.hpp"
#include "fappr/oracle.hpp"
#include "support/fixtures.hpp"

using namespace fappr;

namespace {

BigMoveOptions options(std::uint32_t threshold, double alpha) {
  BigMoveOptions o;
  o.threshold = threshold;
  o.alpha = alpha;
  return o;
}

std::map<WalkOutcome, double> as_map(std::span<const BigMove> moves) {
  std::map<WalkOutcome, double> m;
  for (const BigMove& mv : moves) m[{mv.target, mv.active}] += mv.probability;
  return m;
}

void check_against_enumeration(const WeightedGraph& g, const BigMoveTable& table, double alpha) {
  for (NodeId v : table.nodes()) {
    auto moves = table.moves(v);
    std::map<WalkOutcome, int> seen;
    double sum = 0.0;
    for (const BigMove& m : moves) {
      CHECK(m.probability > 0.0);
      CHECK(++seen[{m.target, m.active}] == 1);
      sum += m.probability;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);

    auto expected = enumerate_walks(g, v, table.depth(v), alpha);
    auto got = as_map(moves);
    for (const auto& [key, mass] : expected) {
      if (mass == 0.0) continue;
      REQUIRE(got.contains(key));
      CHECK(std::abs(got[key] - mass) <= 1e-9);
    }
    for (const auto& [key, mass] : got) CHECK(expected.contains(key));
  }
}

}  // namespace

TEST_CASE("worked example: big moves of v2 with d = 4, alpha = 0.5") {
  auto g = fappr::testing::toy_graph();
  auto stats = degree_stats(g);
  auto table = precompute_big_moves(g, stats.small_nodes, options(4, 0.5));
  auto moves = table.moves(2);
  REQUIRE(moves.size() == 3);
  CHECK(moves[0] == BigMove{3, false, 0.625});
  CHECK(moves[1] == BigMove{4, false, 0.25});
  CHECK(moves[2] == BigMove{3, true, 0.125});
  CHECK(table.depth(2) == 3);
}

TEST_CASE("the sink v1 gets no big moves") {
  auto g = fappr::testing::toy_graph();
  auto table = precompute_big_moves(g, degree_stats(g).small_nodes, options(4, 0.5));
  CHECK_FALSE(table.contains(1));
  CHECK_THROWS_AS(table.entry(1), NotFoundError);
  CHECK(table.nodes() == std::vector<NodeId>{2, 3, 4, 5, 6, 7});
}

TEST_CASE("threshold 1 skips expansion") {
  auto g = fappr::testing::graph_from_text("0 1 1\n1 0 1\n1 2 1\n2 0 1\n");
  const double alpha = 0.3;
  const std::vector<NodeId> small{0};
  auto table = precompute_big_moves(g, small, options(1, alpha));
  auto moves = table.moves(0);
  REQUIRE(moves.size() == 2);
  CHECK(moves[0] == BigMove{1, false, alpha});
  CHECK(moves[1] == BigMove{1, true, 1.0 - alpha});
  CHECK(table.depth(0) == 1);
}

TEST_CASE("big moves match path enumeration on the toy graph") {
  auto g = fappr::testing::toy_graph();
  for (std::uint32_t d : {1U, 2U, 4U, 8U, 32U}) {
    for (double alpha : {0.15, 0.5, 0.8}) {
      auto table = precompute_big_moves(g, degree_stats(g).small_nodes, options(d, alpha));
      check_against_enumeration(g, table, alpha);
    }
  }
}

TEST_CASE("big moves match path enumeration on random graphs with sinks") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto g = fappr::testing::random_graph(30, 3, 0.15, seed);
    std::vector<NodeId> all(g.node_count());
    std::iota(all.begin(), all.end(), 0U);
    auto table = precompute_big_moves(g, all, options(12, 0.35), 3);
    check_against_enumeration(g, table, 0.35);
  }
}

TEST_CASE("raw frontier counting keeps the same distribution") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto g = fappr::testing::random_graph(25, 4, 0.1, seed);
    std::vector<NodeId> all(g.node_count());
    std::iota(all.begin(), all.end(), 0U);
    auto opt = options(20, 0.5);
    opt.count_raw_frontier = true;
    auto table = precompute_big_moves(g, all, opt);
    check_against_enumeration(g, table, 0.5);
  }
}

TEST_CASE("expansion stops on a fixpoint even with a huge threshold") {
  // 0 -> 1 -> 0 only ever reaches {0, 1}.
  auto g = fappr::testing::graph_from_text("0 1 1\n1 0 1\n");
  const std::vector<NodeId> small{0};
  auto table = precompute_big_moves(g, small, options(1'000'000, 0.5));
  CHECK(table.depth(0) == 3);
  check_against_enumeration(g, table, 0.5);
}

TEST_CASE("sampling big moves follows their masses") {
  auto g = fappr::testing::toy_graph();
  auto table = precompute_big_moves(g, degree_stats(g).small_nodes, options(4, 0.5));
  std::mt19937_64 rng(4);
  const int draws = 1'000'000;
  std::map<WalkOutcome, double> freq;
  double active = 0.0;
  for (int i = 0; i < draws; ++i) {
    const BigMove& m = sample_big_move(table, 2, rng);
    freq[{m.target, m.active}] += 1.0 / draws;
    if (m.active) active += 1.0 / draws;
  }
  CHECK(std::abs(freq[{3, false}] - 0.625) <= 0.005);
  CHECK(std::abs(freq[{4, false}] - 0.25) <= 0.005);
  CHECK(std::abs(freq[{3, true}] - 0.125) <= 0.005);
  CHECK(std::abs(active - 0.125) <= 0.005);
}

TEST_CASE("a single move is always taken") {
  BigMoveTable::Entry entry;
  entry.moves = {BigMove{5, false, 1.0}};
  entry.sampler = build_alias(std::vector<double>{1.0});
  entry.depth = 1;
  BigMoveTable table(6, {5}, {entry});
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) CHECK(sample_big_move(table, 5, rng) == BigMove{5, false, 1.0});
  CHECK_THROWS_AS(sample_big_move(table, 4, rng), NotFoundError);
}

TEST_CASE("precompute validates its parameters") {
  auto g = fappr::testing::toy_graph();
  const std::vector<NodeId> small{2};
  CHECK_THROWS_AS(precompute_big_moves(g, small, options(4, 0.0)), ValidationError);
  CHECK_THROWS_AS(precompute_big_moves(g, small, options(4, 1.0)), ValidationError);
  CHECK_THROWS_AS(precompute_big_moves(g, small, options(0, 0.5)), ValidationError);
}

TEST_CASE("worker count does not change the table") {
  auto g = fappr::testing::power_law_graph(2000, 3);
  auto small = degree_stats(g).small_nodes;
  CHECK(precompute_big_moves(g, small, options(16, 0.5), 1) == precompute_big_moves(g, small, options(16, 0.5), 4));
}
