#pragma once

// Ground truth for the constructions: an exhaustive oracle written
// independently of the search backend, isomorphism-reduced instance
// enumeration, and theorem sweeps that aggregate constructor outcomes.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hcube/cube.hpp"
#include "hcube/structures.hpp"

namespace hcube {

// --- oracle ------------------------------------------------------------------

enum class Feasibility { feasible, infeasible, unknown };

const char* to_string(Feasibility f);

struct OracleVerdict {
    Feasibility feasibility = Feasibility::unknown;
    std::optional<HamCycle> witness;
    std::uint64_t nodes = 0;
};

/// Is there a Hamiltonian cycle of Q_n containing M and avoiding F?
/// n <= 4 is answered from the complete list of Hamiltonian cycles of Q_n;
/// n = 5, 6 by a plain depth-first search that reports unknown when it runs
/// out of nodes. Requires 2 <= n <= 6.
OracleVerdict oracle(int n, const EdgeSet& matching, const EdgeSet& faults,
                     std::uint64_t node_limit = 200'000'000);

/// Every Hamiltonian cycle of Q_n (n <= 4) as a set of edges, each cycle once.
const std::vector<EdgeSet>& all_hamiltonian_cycles(int n);

// --- enumeration ---------------------------------------------------------------

/// Calls fn(M, F) once for every matching M of size m_size and every
/// F ⊆ E(Q_n) \ M of size f_size.
void for_each_instance(int n, int m_size, int f_size, const std::function<void(const EdgeSet&, const EdgeSet&)>& fn);

/// One canonical representative per isomorphism class of (M, F), sorted.
std::vector<InstanceClass> enumerate_classes(int n, int m_size, int f_size);

/// Raw instances (up_to_iso = false) or class representatives.
std::vector<InstanceClass> enumerate_instances(int n, int m_size, int f_size, bool up_to_iso);

/// Number of raw instances, counted without materialising them.
std::uint64_t count_instances(int n, int m_size, int f_size);

/// Sum over the classes of |Aut(Q_n)| / |Stab(M, F)|; equals the raw count.
std::uint64_t orbit_size_total(int n, const std::vector<InstanceClass>& classes);

/// Number of classes of pairs (M, u) with |M| = m_size and u not covered by M.
int count_matching_vertex_classes(int n, int m_size);

/// Random matching of the given size (greedy over a shuffled edge list,
/// retried until the size is reached).
EdgeSet random_matching(int n, int m_size, std::mt19937_64& rng);

/// Random set of f_size edges avoiding `avoid`.
EdgeSet random_edges(int n, int f_size, const EdgeSet& avoid, std::mt19937_64& rng);

// --- sweeps ------------------------------------------------------------------

struct SweepCell {
    int m_size = 0;
    int f_size = 0;
};

struct ExceptionalInstance {
    InstanceClass instance;
    Feasibility oracle = Feasibility::unknown;
};

struct SweepReport {
    int theorem = 1;
    int n = 0;
    SweepCell cell;
    bool sampled = false;
    std::uint64_t seed = 0;
    std::uint64_t tested = 0;
    std::uint64_t successes = 0;
    std::uint64_t exceptional = 0;     // case-a verdicts confirmed infeasible by the oracle
    std::uint64_t disagreements = 0;   // oracle and constructor disagree on feasibility
    std::uint64_t failures = 0;        // errors, invalid cycles
    std::uint64_t oracle_checked = 0;
    double wall_seconds = 0.0;
    std::vector<ExceptionalInstance> exceptional_instances;
    std::vector<std::string> failure_messages;  // first few only
    std::map<std::string, std::uint64_t> label_counts;

    bool pass() const { return disagreements == 0 && failures == 0; }
};

struct SweepOptions {
    std::uint64_t samples = 0;  // 0: every isomorphism class of the cell
    std::uint64_t seed = 1;
    bool oracle_on_every_instance = false;  // cross-check successes too (n <= 4)
};

/// Largest legal fault count for a theorem cell.
int max_faults(int theorem, int n, int m_size);

/// Every legal (|M|, |F|) cell of the theorem at dimension n.
std::vector<SweepCell> legal_cells(int theorem, int n);

/// Runs the constructor over the cell and validates every output.
/// Throws ArgumentError for cells outside the theorem's bounds.
SweepReport sweep(int theorem, int n, SweepCell cell, const SweepOptions& options);

/// One-line structured text rendering of a report.
std::string format_report_line(const SweepReport& r);

}  // namespace hcube
