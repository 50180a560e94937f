#pragma once

// Induction bases for the matching-extension constructions in Q_3, Q_4 and
// Q_5, together with the catalogue of exceptional (M, F) configurations,
// which is derived by exhaustive search rather than transcribed.

#include <optional>
#include <string>
#include <vector>

#include "hcube/cube.hpp"
#include "hcube/structures.hpp"
#include "hcube/trace.hpp"

namespace hcube {

/// The configurations with no Hamiltonian cycle through M avoiding F:
/// two classes in Q_3 with |M| = 2, |F| = 1 and one in Q_4 with |M| = 4, |F| = 1.
struct ExceptionCatalog {
    std::vector<InstanceClass> q3_classes;
    InstanceClass q4_class;

    friend bool operator==(const ExceptionCatalog&, const ExceptionCatalog&) = default;
};

/// Enumerates both cells, canonicalises and runs the exhaustive solver on
/// every class. Throws CatalogMismatch unless exactly 2 and 1 classes are
/// infeasible, or if the Q_4 class does not lie inside one dimension class.
ExceptionCatalog build_exception_catalog();

/// Built on first use, immutable afterwards.
const ExceptionCatalog& exception_catalog();

/// One canonical instance per line: "n=<n> M=<a-b,...> F=<a-b,...>".
std::string export_catalog(const ExceptionCatalog& c);
ExceptionCatalog parse_catalog(const std::string& text);

/// (M, F) in Q_3 is one of the two infeasible classes.
bool is_q3_exception(const EdgeSet& matching, const EdgeSet& faults);

/// (M, F) in Q_4 is the exceptional class; false whenever |M| != 4 or |F| != 1.
bool is_case_a(const EdgeSet& matching, const EdgeSet& faults);

/// Hamiltonian u-v path of Q_3 through M, where u is not covered by M and
/// d(u, v) is odd.
HamPath q3_path_through_matching(Vertex u, Vertex v, const EdgeSet& matching);

/// Hamiltonian cycle of Q_n (n = 2, 3, 4) containing the matching M.
HamCycle base_cycle_small(int n, const EdgeSet& matching, ConstructionTrace* trace = nullptr);

/// Hamiltonian cycle of Q_3 through M (|M| = 3) and e, or nullopt for the
/// single exceptional (M, e) configuration.
std::optional<HamCycle> q3_matching_plus_edge(const EdgeSet& matching, const Edge& e);

/// Hamiltonian cycle of Q_3 - F through M with |M| = 2, |F| = 1, or nullopt
/// when (M, F) is one of the two catalogued exceptions.
std::optional<HamCycle> q3_cycle_two_edges_one_fault(const EdgeSet& matching, const EdgeSet& faults);

enum class Q4Mode {
    case_split,   // route through the sub-construction that applies to the shape of (M, F)
    pure_solver,  // ask the search backend directly (for differential testing)
};

struct BaseOutcome {
    std::optional<HamCycle> cycle;  // empty: the exceptional class
    bool case_a() const { return !cycle.has_value(); }
};

/// Q_4 base of the fault-tolerant theorem: 1 <= |M| <= 6,
/// |F| <= 3 - ceil(|M| / 2), M ∩ F = ∅.
BaseOutcome q4_base(const EdgeSet& matching, const EdgeSet& faults, Q4Mode mode = Q4Mode::case_split,
                    ConstructionTrace* trace = nullptr);

/// Split dimension for Q_5 with |E_j ∩ (M ∪ F)| <= 1 such that neither half
/// is the exceptional Q_4 class. 1 <= |M| <= 8, |F| <= 4 - ceil(|M| / 2).
int q5_choose_dimension(const EdgeSet& matching, const EdgeSet& faults);

/// Every case label the Q_4 base and the small-cycle base can emit.
const std::vector<std::string>& base_case_labels();

}  // namespace hcube
