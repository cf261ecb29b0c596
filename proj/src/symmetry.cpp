#include "qdcd/symmetry.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "qdcd/counterdiabatic.hpp"
#include "qdcd/hamiltonians.hpp"

namespace qdcd {

namespace {

// Union-find with path halving, orbit ids renumbered by smallest member.
struct UnionFind {
  std::vector<int> parent;

  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> orbit_ids() {
    std::vector<int> ids(parent.size(), -1);
    int next = 0;
    for (size_t i = 0; i < parent.size(); ++i) {
      const int root = find(static_cast<int>(i));
      if (ids[root] < 0) ids[root] = next++;
      ids[i] = ids[root];
    }
    return ids;
  }
};

}  // namespace

std::vector<Permutation> automorphism_group(const Graph& g) {
  if (g.n > 12)
    throw std::invalid_argument(
        "automorphism_group: exhaustive search limited to n <= 12");
  std::vector<uint16_t> adj(g.n, 0);
  for (const auto& [i, j] : g.edges) {
    adj[i] |= uint16_t(1) << j;
    adj[j] |= uint16_t(1) << i;
  }
  const std::vector<int> deg = g.degrees();
  std::vector<Permutation> autos;
  Permutation perm(g.n, -1);
  std::vector<char> used(g.n, 0);
  auto backtrack = [&](auto&& self, int v) -> void {
    if (v == g.n) {
      autos.push_back(perm);
      return;
    }
    for (int w = 0; w < g.n; ++w) {
      if (used[w] || deg[w] != deg[v]) continue;
      bool ok = true;
      for (int u = 0; u < v && ok; ++u) {
        const bool have = adj[u] & (uint16_t(1) << v);
        const bool want = adj[perm[u]] & (uint16_t(1) << w);
        ok = have == want;
      }
      if (!ok) continue;
      perm[v] = w;
      used[w] = 1;
      self(self, v + 1);
      used[w] = 0;
      perm[v] = -1;
    }
  };
  backtrack(backtrack, 0);
  return autos;
}

OrbitPartition orbits(const Graph& g, const std::vector<Permutation>& autos) {
  if (autos.empty()) throw std::invalid_argument("orbits: empty group");
  OrbitPartition out;

  UnionFind vuf(g.n);
  for (const auto& p : autos)
    for (int v = 0; v < g.n; ++v) vuf.unite(v, p[v]);
  out.vertex_orbit = vuf.orbit_ids();

  const int ne = static_cast<int>(g.edges.size());
  UnionFind euf(std::max(ne, 1));
  for (const auto& p : autos) {
    for (int e = 0; e < ne; ++e) {
      const auto& [i, j] = g.edges[e];
      const int img = g.edge_index(p[i], p[j]);
      if (img < 0)
        throw std::invalid_argument("orbits: permutation is not an automorphism");
      euf.unite(e, img);
    }
  }
  out.edge_orbit = ne > 0 ? euf.orbit_ids() : std::vector<int>{};

  // Arc orbits by (tail orbit, head orbit, edge orbit) key; ids ordered by
  // first appearance over arcs sorted lexicographically.
  std::map<std::tuple<int, int, int>, int> key_to_id;
  std::vector<std::pair<int, int>> arcs;
  for (const auto& [i, j] : g.edges) {
    arcs.emplace_back(i, j);
    arcs.emplace_back(j, i);
  }
  std::sort(arcs.begin(), arcs.end());
  for (const auto& [a, b] : arcs) {
    const std::tuple<int, int, int> key{out.vertex_orbit[a],
                                        out.vertex_orbit[b],
                                        out.edge_orbit[g.edge_index(a, b)]};
    auto it = key_to_id.find(key);
    if (it == key_to_id.end())
      it = key_to_id.emplace(key, static_cast<int>(key_to_id.size())).first;
    out.arc_orbit[{a, b}] = it->second;
  }

  const int nvo = *std::max_element(out.vertex_orbit.begin(),
                                    out.vertex_orbit.end()) + 1;
  out.vertex_orbits.assign(nvo, {});
  for (int v = 0; v < g.n; ++v) out.vertex_orbits[out.vertex_orbit[v]].push_back(v);
  if (ne > 0) {
    const int neo =
        *std::max_element(out.edge_orbit.begin(), out.edge_orbit.end()) + 1;
    out.edge_orbits.assign(neo, {});
    for (int e = 0; e < ne; ++e)
      out.edge_orbits[out.edge_orbit[e]].push_back(g.edges[e]);
    out.arc_orbits.assign(key_to_id.size(), {});
    for (const auto& [a, b] : arcs) out.arc_orbits[out.arc_orbit[{a, b}]].emplace_back(a, b);
  }
  return out;
}

std::vector<std::vector<std::pair<int, int>>> arc_orbits_direct(
    const Graph& g, const std::vector<Permutation>& autos) {
  std::vector<std::pair<int, int>> arcs;
  for (const auto& [i, j] : g.edges) {
    arcs.emplace_back(i, j);
    arcs.emplace_back(j, i);
  }
  std::sort(arcs.begin(), arcs.end());
  const int na = static_cast<int>(arcs.size());
  auto arc_id = [&](int a, int b) {
    const auto it = std::lower_bound(arcs.begin(), arcs.end(),
                                     std::make_pair(a, b));
    return static_cast<int>(it - arcs.begin());
  };
  UnionFind uf(std::max(na, 1));
  for (const auto& p : autos)
    for (int k = 0; k < na; ++k)
      uf.unite(k, arc_id(p[arcs[k].first], p[arcs[k].second]));
  std::vector<std::vector<std::pair<int, int>>> out;
  if (na == 0) return out;
  const std::vector<int> ids = uf.orbit_ids();
  out.assign(*std::max_element(ids.begin(), ids.end()) + 1, {});
  for (int k = 0; k < na; ++k) out[ids[k]].push_back(arcs[k]);
  return out;
}

std::vector<int> ParamGroupMap::group_sizes() const {
  std::vector<int> sizes(n_groups, 0);
  for (int gid : group_of) ++sizes[gid];
  return sizes;
}

ParamGroupMap group_parameters(const CDPool& pool, const Graph& g,
                               const OrbitPartition& orb) {
  ParamGroupMap map;
  map.group_of.resize(pool.size());
  std::map<std::tuple<int, int, std::string>, int> key_to_group;
  for (size_t k = 0; k < pool.size(); ++k) {
    const PoolElement& el = pool.elements[k];
    std::tuple<int, int, std::string> key;
    switch (el.support.kind) {
      case SupportKind::Vertex: {
        if (el.support.a < 0 || el.support.a >= g.n)
          throw std::invalid_argument("group_parameters: vertex out of range");
        key = {0, orb.vertex_orbit[el.support.a], el.family};
        break;
      }
      case SupportKind::Arc: {
        const auto it = orb.arc_orbit.find({el.support.a, el.support.b});
        if (it == orb.arc_orbit.end())
          throw std::invalid_argument(
              "group_parameters: arc is not an arc of the graph");
        key = {1, it->second, el.family};
        break;
      }
      case SupportKind::Global:
        key = {2, static_cast<int>(k), el.family};
        break;
    }
    auto it = key_to_group.find(key);
    if (it == key_to_group.end())
      it = key_to_group.emplace(key, map.n_groups++).first;
    map.group_of[k] = it->second;
  }
  return map;
}

PoolSizes pool_sizes(const Graph& g, const TermSum& h0, const TermSum& hp) {
  const CDPool pool = cd_pool(h0, hp);
  const auto autos = automorphism_group(g);
  const OrbitPartition orb = orbits(g, autos);
  const ParamGroupMap map = group_parameters(pool, g, orb);
  return {static_cast<int>(pool.size()), map.n_groups};
}

double reduction_ratio(const Graph& g, const TermSum& h0, const TermSum& hp) {
  return pool_sizes(g, h0, hp).ratio();
}

}  // namespace qdcd
