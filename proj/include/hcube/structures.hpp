#pragma once

// Edge-set predicates and Hamiltonian path/cycle witnesses.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hcube/cube.hpp"

namespace hcube {

using VertexPair = std::pair<Vertex, Vertex>;

bool is_matching(const EdgeSet& edges);

/// Max degree <= 2 and no cycle.
bool is_linear_forest(const EdgeSet& edges);

bool is_perfect_matching(int n, const EdgeSet& edges);

/// Vertex sequence of a Hamiltonian path of Q_n.
struct HamPath {
    int n = 0;
    std::vector<Vertex> seq;

    Vertex front() const { return seq.front(); }
    Vertex back() const { return seq.back(); }
    EdgeSet edges() const;
    friend bool operator==(const HamPath&, const HamPath&) = default;
};

/// Vertex sequence of a Hamiltonian cycle of Q_n; the closing edge
/// back() -> front() is implicit.
struct HamCycle {
    int n = 0;
    std::vector<Vertex> seq;

    EdgeSet edges() const;
    friend bool operator==(const HamCycle&, const HamCycle&) = default;
};

/// Two vertex-disjoint paths covering V(Q_n).
struct SpanningPathPair {
    int n = 0;
    std::vector<Vertex> first;
    std::vector<Vertex> second;
};

/// Cycle edges in traversal order, starting with seq[0] -> seq[1].
std::vector<Edge> edges_in_order(const HamCycle& c);

/// The two neighbours of v on the cycle: (predecessor, successor).
std::pair<Vertex, Vertex> neighbors_on(const HamCycle& c, Vertex v);

/// Index of v in c.seq; throws ArgumentError if absent.
std::size_t position_of(const HamCycle& c, Vertex v);

/// Rotates the minimum vertex to the front and orients towards the smaller
/// of its two cycle neighbours.
HamCycle normalize(HamCycle c);

/// Rebuilds the cycle traversing `edges`; throws InternalInvariantError
/// unless they form a single Hamiltonian cycle of Q_n.
HamCycle assemble_cycle(int n, const EdgeSet& edges);

struct CycleVerdict {
    bool adjacency = true;         // (a) consecutive vertices adjacent
    bool coverage = true;          // (b) every vertex exactly once
    bool contains_matching = true; // (c) M subset of cycle edges
    bool avoids_faults = true;     // (d) no cycle edge in F
    bool malformed_input = false;  // M or F is not a set of Q_n edges, or M not a matching
    std::vector<std::string> problems;

    bool pass() const { return adjacency && coverage && contains_matching && avoids_faults && !malformed_input; }
};

/// Four independent checks of a claimed Hamiltonian cycle; never throws on
/// bad input, failures are reported in the verdict.
CycleVerdict validate_cycle(std::span<const Vertex> cycle, int n, std::span<const VertexPair> matching,
                            std::span<const VertexPair> faults);
CycleVerdict validate_cycle(const HamCycle& c, const EdgeSet& matching, const EdgeSet& faults);

/// Hamiltonian path check with optional endpoints, required and forbidden edges.
bool is_ham_path(const HamPath& p, const EdgeSet& required = {}, const EdgeSet& forbidden = {});

bool is_spanning_pair(const SpanningPathPair& pp);

std::vector<VertexPair> to_pairs(const EdgeSet& s);

}  // namespace hcube
