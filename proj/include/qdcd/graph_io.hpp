#pragma once

#include <string>
#include <vector>

#include "qdcd/graph.hpp"

namespace qdcd {

enum class GraphFormat { Graph6, EdgeList };

/// graph6 short form: header byte n+63 (n <= 62), then the upper-triangle
/// adjacency bits column by column (column j, rows 0..j-1) packed big-endian
/// into 6-bit chunks, each chunk offset by 63. Padding bits must be zero.
/// Trailing whitespace is tolerated.
Graph parse_graph6(const std::string& bytes);
std::string encode_graph6(const Graph& g);

/// Edge list, one "i j" pair per line, 1-based vertex labels, '#' comments.
/// The vertex count is the largest label seen.
Graph parse_edgelist(const std::string& text);
std::string encode_edgelist(const Graph& g);

Graph parse_graph(const std::string& bytes, GraphFormat format);

/// One graph6 string per nonblank line.
std::vector<Graph> parse_graph6_lines(const std::string& text);

/// All connected graphs on n vertices up to isomorphism (n <= 7), built by
/// incremental vertex addition with canonical-form deduplication (minimum
/// edge bitmask over all vertex permutations). Deterministic order.
std::vector<Graph> enumerate_connected_graphs(int n);

}  // namespace qdcd
