#include <doctest.h>

#include <random>
#include <sstream>

#include "fappr/errors.hpp"
#include "fappr/serialize.hpp"
#include "support/fixtures.hpp"

using namespace fappr;
using fappr::testing::power_law_graph;
using fappr::testing::random_distribution;
using fappr::testing::toy_graph;

namespace {

SamplerOptions small_blocks() {
  SamplerOptions o;
  o.tree_block_size = 3;
  o.big_move_threshold = 4;
  return o;
}

}  // namespace

TEST_CASE("alias tables and trees round trip") {
  std::mt19937_64 rng(5);
  for (std::size_t size : {1, 2, 7, 100, 1000}) {
    const auto probs = random_distribution(size, rng);
    const auto table = build_alias(probs);
    std::stringstream buf;
    write_alias_table(buf, table);
    CHECK(read_alias_table(buf) == table);

    std::vector<NodeId> ids(size);
    for (std::size_t i = 0; i < size; ++i) ids[i] = static_cast<NodeId>(3 * i + 1);
    const auto tree = build_alias_tree(ids, probs, 4);
    std::stringstream tbuf;
    write_alias_tree(tbuf, tree);
    CHECK(read_alias_tree(tbuf) == tree);
  }
}

TEST_CASE("sampler file round trip") {
  for (const auto& g : {toy_graph(), power_law_graph(500, 2)}) {
    const auto samplers = Samplers::build(g, small_blocks());
    std::stringstream buf;
    write_samplers(buf, samplers);
    const auto file = read_samplers(buf);
    REQUIRE(file.classes.size() == g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
      CHECK(file.classes[v] == samplers.node_class(v));
      if (samplers.node_class(v) == NodeClass::medium) CHECK(file.tables[v] == samplers.table(v));
      if (samplers.node_class(v) == NodeClass::large) CHECK(file.trees[v] == samplers.tree(v));
    }
  }
}

TEST_CASE("big-move table round trip") {
  const auto g = power_law_graph(800, 4);
  const auto samplers = Samplers::build(g, small_blocks());
  REQUIRE_FALSE(samplers.big_moves().nodes().empty());
  std::stringstream buf;
  write_big_moves(buf, samplers.big_moves());
  const std::string bytes = buf.str();
  CHECK(bytes.substr(0, 8) == "FAPPRBIN");
  CHECK(read_big_moves(buf) == samplers.big_moves());

  std::istringstream copy(bytes);
  std::stringstream again;
  write_big_moves(again, read_big_moves(copy));
  CHECK(again.str() == bytes);
}

TEST_CASE("corrupt input is rejected") {
  const auto samplers = Samplers::build(toy_graph(), small_blocks());
  std::stringstream buf;
  write_big_moves(buf, samplers.big_moves());
  const std::string bytes = buf.str();

  std::istringstream empty("");
  CHECK_THROWS_AS(read_big_moves(empty), ValidationError);

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  std::istringstream m(bad_magic);
  CHECK_THROWS_AS(read_big_moves(m), ValidationError);

  std::string bad_version = bytes;
  bad_version[8] = 9;
  std::istringstream v(bad_version);
  CHECK_THROWS_AS(read_big_moves(v), ValidationError);

  std::istringstream kind(bytes);
  CHECK_THROWS_AS(read_samplers(kind), ValidationError);

  for (std::size_t cut : {bytes.size() / 3, bytes.size() / 2, bytes.size() - 1}) {
    std::istringstream t(bytes.substr(0, cut));
    CHECK_THROWS_AS(read_big_moves(t), ValidationError);
  }
}
