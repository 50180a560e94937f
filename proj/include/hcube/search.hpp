#pragma once

// Backtracking Hamiltonian path/cycle search in Q_n with prescribed and
// forbidden edges. Shared backend of the existence primitives.

#include <cstdint>
#include <optional>
#include <vector>

#include "hcube/cube.hpp"
#include "hcube/structures.hpp"

namespace hcube {

struct SearchBudget {
    std::uint64_t node_limit = 100'000'000;

    /// Reads HCUBE_SEARCH_BUDGET, falling back to the default.
    static SearchBudget from_env();
};

/// Hamiltonian cycle (no endpoints) or x-y Hamiltonian path of Q_n that
/// contains every required edge and no forbidden edge.
struct PathQuery {
    int n = 0;
    std::optional<VertexPair> endpoints;
    EdgeSet required;
    EdgeSet forbidden;
};

enum class SolveStatus { found, infeasible, budget_exceeded };

struct SolveResult {
    SolveStatus status = SolveStatus::infeasible;
    std::vector<Vertex> seq;  // path from x to y, or cycle starting anywhere
    std::uint64_t nodes = 0;

    bool found() const { return status == SolveStatus::found; }
};

SolveResult solve(const PathQuery& q, const SearchBudget& budget = SearchBudget::from_env());

/// Spanning paths x..y and u..v of Q_n - forbidden; with pin_xy the first
/// path is the single edge xy. seq holds x..y followed by u..v.
SolveResult solve_spanning_pair(int n, Vertex x, Vertex y, Vertex u, Vertex v, bool pin_xy,
                                const EdgeSet& forbidden = {},
                                const SearchBudget& budget = SearchBudget::from_env());

}  // namespace hcube
