#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "qdcd/graph.hpp"
#include "qdcd/graph_io.hpp"

using namespace qdcd;

TEST_SUITE("graph") {

TEST_CASE("factories produce the expected edge counts") {
  CHECK(Graph::complete(5).edges.size() == 10);
  CHECK(Graph::path(4).edges.size() == 3);
  CHECK(Graph::cycle(5).edges.size() == 5);
  CHECK(Graph::complete_bipartite(3, 3).edges.size() == 9);
}

TEST_CASE("edges normalize to sorted pairs and duplicates throw") {
  const Graph g(3, {{2, 0}, {1, 2}});
  CHECK(g.edges[0] == std::pair<int, int>{0, 2});
  CHECK(g.edges[1] == std::pair<int, int>{1, 2});
  CHECK_THROWS(Graph(3, {{0, 1}, {1, 0}}));
  CHECK_THROWS(Graph(3, {{0, 0}}));
  CHECK_THROWS(Graph(3, {{0, 3}}));
  CHECK_THROWS(Graph(0, {}));
}

TEST_CASE("edge_index and degrees") {
  const Graph g = Graph::path(4);
  CHECK(g.edge_index(1, 2) == 1);
  CHECK(g.edge_index(2, 1) == 1);
  CHECK(g.edge_index(0, 2) == -1);
  const auto deg = g.degrees();
  CHECK(deg == std::vector<int>{1, 2, 2, 1});
}

TEST_CASE("connectivity") {
  CHECK(Graph::path(6).connected());
  CHECK_FALSE(Graph(4, {{0, 1}, {2, 3}}).connected());
  CHECK(Graph(1, {}).connected());
}

}  // TEST_SUITE

TEST_SUITE("graph_io") {

TEST_CASE("known graph6 strings decode to the right graphs") {
  // P4 and K6 reference encodings from the format's published examples.
  const Graph p4 = parse_graph6("Ch");
  CHECK(p4.n == 4);
  CHECK(p4.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}});
  const Graph k6 = parse_graph6("E~~w");
  CHECK(k6.n == 6);
  CHECK(k6.edges.size() == 15);
}

TEST_CASE("encode round-trips the known strings") {
  CHECK(encode_graph6(Graph::path(4)) == "Ch");
  CHECK(encode_graph6(Graph::complete(6)) == "E~~w");
}

TEST_CASE("round trip on random graphs is the identity") {
  std::mt19937 rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 20);
    std::vector<std::pair<int, int>> edges;
    for (int j = 1; j < n; ++j)
      for (int i = 0; i < j; ++i)
        if (rng() % 2) edges.emplace_back(i, j);
    const Graph g(n, edges);
    const Graph back = parse_graph6(encode_graph6(g));
    CHECK(back.n == g.n);
    CHECK(back.edges == g.edges);
  }
}

TEST_CASE("malformed graph6 inputs are rejected") {
  CHECK_THROWS(parse_graph6(""));
  CHECK_THROWS(parse_graph6("Chh"));      // trailing payload byte
  CHECK_THROWS(parse_graph6("C"));        // truncated payload
  CHECK_THROWS(parse_graph6("C\x1f"));    // byte below the printable range
  CHECK_THROWS(parse_graph6("C\x7f"));    // byte above the printable range
  // Padding bits beyond the n(n-1)/2 data bits must be zero. For n = 3 the
  // payload has 3 data bits and 3 pad bits: 'w' = 111000 is K3, while
  // 'x' = 111001 sets a pad bit and must be rejected.
  CHECK_NOTHROW(parse_graph6("Bw"));
  CHECK_THROWS(parse_graph6("Bx"));
}

TEST_CASE("trailing whitespace is tolerated") {
  const Graph g = parse_graph6("Ch\n");
  CHECK(g.n == 4);
  CHECK(parse_graph6("Ch\r\n").edges.size() == 3);
}

TEST_CASE("edge list parsing") {
  const Graph g = parse_edgelist("# comment\n1 2\n2 3\n\n3 4\n");
  CHECK(g.n == 4);
  CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}});
  CHECK_THROWS(parse_edgelist("1\n"));
  CHECK_THROWS(parse_edgelist("1 2 3\n"));
  CHECK_THROWS(parse_edgelist("0 1\n"));  // labels are 1-based
  CHECK_THROWS(parse_edgelist("2 2\n"));  // self loop
  CHECK_THROWS(parse_edgelist("1 2\n2 1\n"));  // duplicate edge
}

TEST_CASE("edge list encoding round-trips") {
  const Graph g = Graph::cycle(5);
  CHECK(parse_edgelist(encode_edgelist(g)).edges == g.edges);
}

TEST_CASE("multi-line graph6 parsing") {
  const auto graphs = parse_graph6_lines("Ch\nE~~w\n\n");
  REQUIRE(graphs.size() == 2);
  CHECK(graphs[0].n == 4);
  CHECK(graphs[1].n == 6);
}

TEST_CASE("connected graph enumeration matches the known counts") {
  // Connected graphs up to isomorphism on 1..6 vertices.
  const int expected[] = {1, 1, 2, 6, 21, 112};
  for (int n = 1; n <= 6; ++n) {
    const auto graphs = enumerate_connected_graphs(n);
    CHECK(graphs.size() == static_cast<size_t>(expected[n - 1]));
    for (const auto& g : graphs) {
      CHECK(g.n == n);
      CHECK(g.connected());
    }
  }
}

TEST_CASE("enumerated graphs are pairwise distinct as encoded strings") {
  const auto graphs = enumerate_connected_graphs(5);
  std::set<std::string> seen;
  for (const auto& g : graphs) seen.insert(encode_graph6(g));
  CHECK(seen.size() == graphs.size());
}

}  // TEST_SUITE
