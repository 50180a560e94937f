#pragma once

// Classical existence results on Q_n used as building blocks by the
// constructions. Each operation checks its hypotheses, then
// produces a witness (direct construction for Hamiltonian paths, the
// search backend otherwise). A guaranteed witness that cannot be found is
// reported as InternalInvariantError.

#include "hcube/cube.hpp"
#include "hcube/search.hpp"
#include "hcube/structures.hpp"

namespace hcube {

/// Hamiltonian x-y path of Q_n; d(x, y) must be odd.
HamPath havel_path(int n, Vertex x, Vertex y);

/// Hamiltonian x-y path through e; n >= 2, d(x, y) odd, e != xy.
HamPath path_through_edge(int n, Vertex x, Vertex y, const Edge& e);

/// Hamiltonian u-v path of Q_n - F; n >= 3, d(u, v) odd, |F| <= 1.
HamPath path_avoiding_faults(int n, Vertex u, Vertex v, const EdgeSet& faults);

/// Spanning paths P_xy, P_uv of Q_n. With pin_xy the first path is the edge
/// xy itself; the configuration n = 3, d(u,v) = 1, d(xy,uv) = 2 has no such
/// pair and raises ExceptionalCaseError.
SpanningPathPair spanning_two_paths(int n, Vertex x, Vertex y, Vertex u, Vertex v, bool pin_xy);

/// True for the one configuration where a pinned spanning pair cannot exist.
bool is_pinned_pair_exception(int n, Vertex x, Vertex y, Vertex u, Vertex v);

/// Hamiltonian cycle through a linear forest of at most 2n - 3 edges.
HamCycle cycle_through_forest(int n, const EdgeSet& forest);

/// Hamiltonian cycle of Q_n - F through e; n >= 3, |F| <= n - 2.
HamCycle cycle_avoiding_faults_through_edge(int n, const Edge& e, const EdgeSet& faults);

/// Hamiltonian cycle of Q_n - F through a linear forest E with
/// 1 <= |E| <= 2n - 3 and |F| <= n - 2 - floor(|E| / 2).
HamCycle cycle_through_forest_avoiding_faults(int n, const EdgeSet& forest, const EdgeSet& faults);

/// For a perfect matching M of Q_n (2 <= n <= 4), a Hamiltonian cycle whose
/// edges are M plus another perfect matching.
HamCycle complementary_perfect_matching(int n, const EdgeSet& perfect);

}  // namespace hcube
