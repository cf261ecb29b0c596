#include "qdcd/graph_io.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace qdcd {

namespace {

std::string strip_trailing_ws(const std::string& s) {
  size_t end = s.size();
  while (end > 0 && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(0, end);
}

}  // namespace

Graph parse_graph6(const std::string& bytes) {
  const std::string s = strip_trailing_ws(bytes);
  if (s.empty()) throw std::invalid_argument("graph6: empty input");
  const int header = static_cast<unsigned char>(s[0]);
  if (header < 63 || header > 63 + 62)
    throw std::invalid_argument(
        "graph6: bad header byte (only n <= 62 supported)");
  const int n = header - 63;
  if (n < 1) throw std::invalid_argument("graph6: empty graph");
  const int nbits = n * (n - 1) / 2;
  const int nchunks = (nbits + 5) / 6;
  if (static_cast<int>(s.size()) != 1 + nchunks)
    throw std::invalid_argument("graph6: truncated or oversized bit payload");
  std::vector<int> bits;
  bits.reserve(nchunks * 6);
  for (int c = 0; c < nchunks; ++c) {
    const int v = static_cast<unsigned char>(s[1 + c]);
    if (v < 63 || v > 126)
      throw std::invalid_argument("graph6: payload byte out of range");
    const int x = v - 63;
    for (int b = 5; b >= 0; --b) bits.push_back((x >> b) & 1);
  }
  for (size_t i = nbits; i < bits.size(); ++i)
    if (bits[i] != 0)
      throw std::invalid_argument("graph6: nonzero padding bits");
  std::vector<std::pair<int, int>> edges;
  int idx = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i, ++idx)
      if (bits[idx]) edges.emplace_back(i, j);
  return Graph(n, std::move(edges));
}

std::string encode_graph6(const Graph& g) {
  if (g.n > 62)
    throw std::invalid_argument("graph6: only n <= 62 supported");
  std::string out;
  out.push_back(static_cast<char>(g.n + 63));
  const int nbits = g.n * (g.n - 1) / 2;
  std::vector<int> bits(((nbits + 5) / 6) * 6, 0);
  int idx = 0;
  for (int j = 1; j < g.n; ++j)
    for (int i = 0; i < j; ++i, ++idx)
      if (g.has_edge(i, j)) bits[idx] = 1;
  for (size_t c = 0; c < bits.size(); c += 6) {
    int x = 0;
    for (int b = 0; b < 6; ++b) x = (x << 1) | bits[c + b];
    out.push_back(static_cast<char>(x + 63));
  }
  return out;
}

Graph parse_edgelist(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<int, int>> edges;
  int n = 0;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    long i = 0, j = 0;
    if (!(ls >> i)) continue;  // blank or comment-only line
    std::string extra;
    if (!(ls >> j) || (ls >> extra))
      throw std::invalid_argument("edgelist: expected exactly two labels on line " +
                                  std::to_string(lineno));
    if (i < 1 || j < 1)
      throw std::invalid_argument("edgelist: labels are 1-based, line " +
                                  std::to_string(lineno));
    if (i == j)
      throw std::invalid_argument("edgelist: self-loop on line " +
                                  std::to_string(lineno));
    edges.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1));
    n = std::max(n, static_cast<int>(std::max(i, j)));
  }
  if (edges.empty()) throw std::invalid_argument("edgelist: no edges found");
  return Graph(n, std::move(edges));  // duplicate edges rejected here
}

std::string encode_edgelist(const Graph& g) {
  std::string out;
  for (const auto& [i, j] : g.edges)
    out += std::to_string(i + 1) + " " + std::to_string(j + 1) + "\n";
  return out;
}

Graph parse_graph(const std::string& bytes, GraphFormat format) {
  return format == GraphFormat::Graph6 ? parse_graph6(bytes)
                                       : parse_edgelist(bytes);
}

std::vector<Graph> parse_graph6_lines(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Graph> out;
  while (std::getline(in, line)) {
    const std::string stripped = strip_trailing_ws(line);
    if (stripped.empty()) continue;
    out.push_back(parse_graph6(stripped));
  }
  return out;
}

namespace {

// Edge slot numbering for masks: pair (i, j), i < j, in lexicographic order.
int edge_slot(int i, int j, int n) {
  int idx = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b, ++idx)
      if (a == i && b == j) return idx;
  }
  (void)n;
  throw std::logic_error("edge_slot: bad pair");
}

// Permutation action on edge slots for all n! vertex permutations.
std::vector<std::vector<int>> slot_permutations(int n) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    std::vector<int> map(n * (n - 1) / 2);
    int idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++idx)
        map[idx] = edge_slot(std::min(perm[i], perm[j]),
                             std::max(perm[i], perm[j]), n);
    out.push_back(std::move(map));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

uint32_t canonical_mask(uint32_t mask, const std::vector<std::vector<int>>& perms) {
  uint32_t best = ~uint32_t(0);
  for (const auto& map : perms) {
    uint32_t permuted = 0;
    uint32_t rest = mask;
    while (rest) {
      const int bit = __builtin_ctz(rest);
      rest &= rest - 1;
      permuted |= uint32_t(1) << map[bit];
    }
    best = std::min(best, permuted);
  }
  return best;
}

bool mask_connected(uint32_t mask, int n) {
  std::vector<uint32_t> adj(n, 0);
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++idx)
      if (mask & (uint32_t(1) << idx)) {
        adj[i] |= uint32_t(1) << j;
        adj[j] |= uint32_t(1) << i;
      }
  uint32_t seen = 1;
  uint32_t frontier = 1;
  while (frontier) {
    const int v = __builtin_ctz(frontier);
    frontier &= frontier - 1;
    const uint32_t fresh = adj[v] & ~seen;
    seen |= fresh;
    frontier |= fresh;
  }
  return seen == (uint32_t(1) << n) - 1;
}

Graph mask_to_graph(uint32_t mask, int n) {
  std::vector<std::pair<int, int>> edges;
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++idx)
      if (mask & (uint32_t(1) << idx)) edges.emplace_back(i, j);
  return Graph(n, std::move(edges));
}

}  // namespace

std::vector<Graph> enumerate_connected_graphs(int n) {
  if (n < 1 || n > 7)
    throw std::invalid_argument(
        "enumerate_connected_graphs: supported for 1 <= n <= 7");
  // Level m holds canonical masks of all graphs (connected or not) on m
  // vertices; each level-m graph is some level-(m-1) graph plus vertex m-1
  // attached to an arbitrary neighborhood.
  std::vector<uint32_t> level{0};  // the 1-vertex graph
  for (int m = 2; m <= n; ++m) {
    const auto perms = slot_permutations(m);
    std::unordered_set<uint32_t> seen;
    std::vector<uint32_t> next;
    for (const uint32_t parent : level) {
      // Re-index parent edges from K_{m-1} slots to K_m slots.
      uint32_t base = 0;
      {
        int idx_old = 0;
        for (int i = 0; i < m - 1; ++i)
          for (int j = i + 1; j < m - 1; ++j, ++idx_old)
            if (parent & (uint32_t(1) << idx_old))
              base |= uint32_t(1) << edge_slot(i, j, m);
      }
      for (uint32_t nb = 0; nb < (uint32_t(1) << (m - 1)); ++nb) {
        uint32_t mask = base;
        for (int i = 0; i < m - 1; ++i)
          if (nb & (uint32_t(1) << i))
            mask |= uint32_t(1) << edge_slot(i, m - 1, m);
        const uint32_t canon = canonical_mask(mask, perms);
        if (seen.insert(canon).second) next.push_back(canon);
      }
    }
    level = std::move(next);
  }
  std::sort(level.begin(), level.end());
  std::vector<Graph> out;
  for (const uint32_t mask : level)
    if (mask_connected(mask, n)) out.push_back(mask_to_graph(mask, n));
  return out;
}

}  // namespace qdcd
