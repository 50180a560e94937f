#pragma once

// Recursive divide-and-conquer constructions of Hamiltonian cycles through
// a prescribed matching, with and without faulty edges. Each level splits
// Q_n along one dimension, solves one or both halves and joins the pieces by
// cycle surgery.

#include <optional>
#include <string>
#include <vector>

#include "hcube/cube.hpp"
#include "hcube/structures.hpp"
#include "hcube/trace.hpp"

namespace hcube {

// --- surgery -------------------------------------------------------------------

/// C0 lives in half `side0` and C1 in the other half, both in Q_{n-1}
/// coordinates. Removes uv from both and joins them by uu_1 and vv_1.
HamCycle merge_cycles(const HamCycle& c0, const HamCycle& c1, const Edge& uv, const SubcubeSplit& split,
                      int side0);

/// Removes uv from C0 and joins the u-v path P1 of the other half.
HamCycle merge_cycle_path(const HamCycle& c0, const HamPath& p1, const Edge& uv, const SubcubeSplit& split,
                          int side0);

/// General form: removes `removed` from C0, adds `added` inside half `side0`,
/// and connects every endpoint of P1 to its partner in half `side0`.
HamCycle merge_cycle_path(const HamCycle& c0, const HamPath& p1, const EdgeSet& removed, const EdgeSet& added,
                          const SubcubeSplit& split, int side0);

/// Removes `removed` from C0, adds `added` inside half `side0` and joins the
/// four endpoints of the spanning path pair of the other half across E_j.
HamCycle merge_cycle_two_paths(const HamCycle& c0, const SpanningPathPair& pair, const EdgeSet& removed,
                               const EdgeSet& added, const SubcubeSplit& split, int side0);

// --- constructions -------------------------------------------------------------

/// Hamiltonian cycle of Q_n containing M; n >= 2, |M| <= 2n - 1.
HamCycle extend_matching(int n, const EdgeSet& matching, ConstructionTrace* trace = nullptr);

struct FaultyOutcome {
    std::optional<HamCycle> cycle;  // empty: the exceptional Q_4 class
    bool case_a() const { return !cycle.has_value(); }
};

/// Hamiltonian cycle of Q_n - F containing M; n >= 4, 1 <= |M| <= 2n - 2,
/// |F| <= n - 1 - ceil(|M| / 2). Reports the case-a verdict only for the
/// exceptional class at n = 4.
FaultyOutcome extend_matching_faulty(int n, const EdgeSet& matching, const EdgeSet& faults,
                                     ConstructionTrace* trace = nullptr);

/// Every case label of the two recursive constructions.
const std::vector<std::string>& construction_case_labels();

}  // namespace hcube
