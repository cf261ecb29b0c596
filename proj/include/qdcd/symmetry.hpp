#pragma once

#include <map>
#include <utility>
#include <vector>

#include "qdcd/graph.hpp"

namespace qdcd {

struct CDPool;

/// Vertex relabeling: perm[v] is the image of v.
using Permutation = std::vector<int>;

/// Orbit decomposition of vertices, edges, and ordered arcs under the
/// automorphism group. Orbit ids are assigned by smallest member, so the
/// numbering is canonical for a given graph labeling.
///
/// Arc orbits are computed by key grouping: two arcs share an orbit when
/// their tail vertex orbits, head vertex orbits, and underlying edge orbits
/// all agree. On graphs whose edge orbits are arc-regular (every graph small
/// enough for this toolkit; the smallest exception known is the 27-vertex
/// half-transitive graph) this coincides with the direct group action, which
/// `arc_orbits_direct` exposes for cross-checks.
struct OrbitPartition {
  std::vector<int> vertex_orbit;                 // per vertex
  std::vector<int> edge_orbit;                   // per edge index in Graph
  std::map<std::pair<int, int>, int> arc_orbit;  // per ordered arc

  std::vector<std::vector<int>> vertex_orbits;
  std::vector<std::vector<std::pair<int, int>>> edge_orbits;
  std::vector<std::vector<std::pair<int, int>>> arc_orbits;
};

/// All automorphisms by backtracking with degree pruning. Guarded to n <= 12;
/// the group is returned in full (identity first, lexicographic order).
std::vector<Permutation> automorphism_group(const Graph& g);

OrbitPartition orbits(const Graph& g, const std::vector<Permutation>& autos);

/// Arc orbits from the direct action of the group on ordered pairs.
std::vector<std::vector<std::pair<int, int>>> arc_orbits_direct(
    const Graph& g, const std::vector<Permutation>& autos);

/// Assignment of pool elements to shared parameter slots: two elements share
/// a slot exactly when their supports lie in the same orbit and their
/// operator content (family label) is identical. Group ids follow first
/// appearance in pool order.
struct ParamGroupMap {
  std::vector<int> group_of;  // pool index -> group id
  int n_groups = 0;

  std::vector<int> group_sizes() const;
};

ParamGroupMap group_parameters(const CDPool& pool, const Graph& g,
                               const OrbitPartition& orb);

/// Grouped vs ungrouped parameter counts for the first-order pool of the
/// problem (h0, hp) on g, and their ratio grouped/total.
struct PoolSizes {
  int total = 0;
  int grouped = 0;
  double ratio() const { return static_cast<double>(grouped) / total; }
};

PoolSizes pool_sizes(const Graph& g, const class TermSum& h0,
                     const class TermSum& hp);
double reduction_ratio(const Graph& g, const class TermSum& h0,
                       const class TermSum& hp);

}  // namespace qdcd
