#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "globalwalk/errors.hpp"
#include "globalwalk/graph.hpp"
#include "oracles.hpp"

using namespace globalwalk;

namespace {

std::vector<NodeId> as_vec(std::span<const NodeId> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("undirected edge list stores both directions") {
  const Graph g = parse_edge_list("0 1\n1 2\n", false);
  CHECK(g.node_count() == 3);
  CHECK(as_vec(g.neighbors(1)) == std::vector<NodeId>{0, 2});
  CHECK(g.edge_count() == 2);
  CHECK(g.arc_count() == 4);
}

TEST_CASE("directed load drops self-loops and collapses duplicates") {
  const Graph g = parse_edge_list("a b\nb a\na a\na b\n", true);
  REQUIRE(g.node_count() == 2);
  const NodeId a = *g.names().find("a");
  const NodeId b = *g.names().find("b");
  CHECK(a == 0);
  CHECK(b == 1);
  CHECK(as_vec(g.neighbors(a)) == std::vector<NodeId>{b});
  CHECK(as_vec(g.neighbors(b)) == std::vector<NodeId>{a});
  CHECK(g.edge_count() == 2);
}

TEST_CASE("comments and blank lines are skipped") {
  const Graph g = parse_edge_list("# header\n\n  x y\n# c\ny z\n", false);
  CHECK(g.node_count() == 3);
  CHECK(g.names().name(0) == "x");
}

TEST_CASE("malformed lines name the line number") {
  CHECK_THROWS_WITH_AS(parse_edge_list("0 1\n0 1 2\n", false), "line 2: expected 2 tokens, got 3",
                       ParseError);
  CHECK_THROWS_AS(parse_edge_list("7\n", false), ParseError);
}

TEST_CASE("empty input is an empty graph error") {
  CHECK_THROWS_WITH_AS(parse_edge_list("", false), "empty graph", ParseError);
  CHECK_THROWS_WITH_AS(parse_edge_list("# only comments\n", true), "empty graph", ParseError);
}

TEST_CASE("neighbors") {
  const Graph tri = oracle::make_graph(3, {{0, 1}, {1, 2}, {0, 2}}, false);
  CHECK(as_vec(tri.neighbors(0)) == std::vector<NodeId>{1, 2});

  const Graph isolated = parse_edge_list("a b\nc c\n", false);
  CHECK(isolated.neighbors(*isolated.names().find("c")).empty());

  const Graph chain = oracle::make_graph(3, {{0, 1}, {1, 2}}, true);
  CHECK(as_vec(chain.neighbors(1)) == std::vector<NodeId>{2});

  CHECK_THROWS_AS(tri.neighbors(3), ContractViolation);
}

TEST_CASE("adjacency invariants hold on random inputs") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const bool directed = seed % 2 == 0;
    // Raw list with duplicates and self-loops thrown in.
    auto raw = oracle::random_edges(15, 0.3, directed, seed);
    const auto copy = raw;
    raw.insert(raw.end(), copy.begin(), copy.begin() + static_cast<std::ptrdiff_t>(copy.size() / 2));
    raw.emplace_back(3, 3);
    const Graph g = oracle::make_graph(15, raw, directed);
    const auto sets = oracle::adjacency_sets(15, raw, directed);
    std::size_t total = 0;
    for (NodeId u = 0; u < 15; ++u) {
      const auto nb = as_vec(g.neighbors(u));
      CHECK(nb == std::vector<NodeId>(sets[u].begin(), sets[u].end()));
      CHECK(std::find(nb.begin(), nb.end(), u) == nb.end());
      for (NodeId v : nb) {
        CHECK(v < 15);
        if (!directed) CHECK(g.has_edge(v, u));
      }
      total += nb.size();
    }
    if (!directed) CHECK(total == 2 * g.edge_count());
  }
}

TEST_CASE("edge list round trip preserves indices and isolated nodes") {
  const Graph g = parse_edge_list("z y\nq q\ny x\nx z\nw v\n", false);
  const auto text = format_edge_list(g);
  const Graph back = parse_edge_list(text, false);
  CHECK(back == g);

  const Graph d = oracle::random_graph(12, 0.25, true, 5);
  CHECK(parse_edge_list(format_edge_list(d), true) == d);

  const auto path = std::filesystem::temp_directory_path() / "gw_roundtrip_edges.txt";
  write_edge_list(d, path);
  CHECK(load_edge_list(path, true) == d);
  std::filesystem::remove(path);
}

TEST_CASE("loading is deterministic") {
  const std::string text = "5 3\n3 9\n9 1\n1 5\n";
  CHECK(parse_edge_list(text, false) == parse_edge_list(text, false));
}

TEST_CASE("labels are densely re-indexed") {
  const Graph g = oracle::make_graph(3, {{0, 1}, {1, 2}}, false);
  const LabelMap m = parse_labels("0 red\n1 red\n2 blue\n", g.names());
  CHECK(m.k() == 2);
  CHECK(m.labels == std::vector<int>{0, 0, 1});
  CHECK(m.community_names == std::vector<std::string>{"red", "blue"});
  CHECK(m.labeled_count() == 3);
}

TEST_CASE("label errors") {
  const Graph g = oracle::make_graph(3, {{0, 1}, {1, 2}}, false);
  CHECK_THROWS_WITH_AS(parse_labels("0 a\n9 b\n", g.names()), "line 2: unknown node id '9'",
                       ParseError);
  CHECK_THROWS_AS(parse_labels("0 a\n0 b\n", g.names()), ParseError);
  CHECK_NOTHROW(parse_labels("0 a\n0 a\n", g.names()));
  const LabelMap partial = parse_labels("0 a\n", g.names());
  CHECK_FALSE(partial.is_labeled(2));
}
