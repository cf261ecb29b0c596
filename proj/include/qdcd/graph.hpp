#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qdcd {

/// Simple undirected graph on vertices 0..n-1. Edges are stored as ordered
/// pairs (i, j) with i < j, sorted lexicographically, with no duplicates.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  Graph() = default;
  Graph(int n_, std::vector<std::pair<int, int>> edges_);

  static Graph complete(int n);
  static Graph path(int n);
  static Graph cycle(int n);
  static Graph complete_bipartite(int a, int b);

  bool has_edge(int i, int j) const;
  int edge_index(int i, int j) const;  // -1 if absent
  std::vector<int> degrees() const;
  std::vector<std::vector<int>> adjacency_lists() const;
  bool connected() const;
};

}  // namespace qdcd
