#include <doctest.h>

#include <map>
#include <set>

#include "hcube/basecases.hpp"
#include "hcube/errors.hpp"
#include "hcube/primitives.hpp"
#include "hcube/verify.hpp"

using namespace hcube;

namespace {

bool some_cycle_contains(const EdgeSet& edges) {
    for (const auto& c : all_hamiltonian_cycles(3)) {
        bool all = true;
        for (const auto& e : edges) all = all && c.contains(e);
        if (all) return true;
    }
    return false;
}

Edge E(Vertex a, Vertex b) { return Edge::between(a, b); }

bool single_dimension_class(const InstanceClass& c) {
    const EdgeSet all = c.matching.unite(c.faults);
    for (const auto& e : all)
        if (e.dim != all[0].dim) return false;
    return true;
}

}  // namespace

TEST_CASE("the exception catalog has two Q_3 classes and one Q_4 class") {
    const ExceptionCatalog& cat = exception_catalog();
    CHECK(cat.q3_classes.size() == 2);
    for (const auto& c : cat.q3_classes) {
        CHECK(c.n == 3);
        CHECK(c.matching.size() == 2);
        CHECK(c.faults.size() == 1);
    }
    CHECK(cat.q4_class.n == 4);
    CHECK(cat.q4_class.matching.size() == 4);
    CHECK(cat.q4_class.faults.size() == 1);
    CHECK(single_dimension_class(cat.q4_class));
}

TEST_CASE("catalog export is stable and round-trips") {
    const std::string text = export_catalog(exception_catalog());
    CHECK(text == export_catalog(build_exception_catalog()));
    CHECK(parse_catalog(text) == exception_catalog());
    CHECK_THROWS_AS(parse_catalog("n=3 M=0-1 F=2-3\n"), ParseError);
}

TEST_CASE("is_case_a") {
    const InstanceClass& a = exception_catalog().q4_class;
    CHECK(is_case_a(a.matching, a.faults));
    CHECK_FALSE(is_case_a(EdgeSet{E(0, 1)}, a.faults));
    for (const auto& cls : enumerate_classes(4, 4, 1))
        if (!single_dimension_class(cls)) CHECK_FALSE(is_case_a(cls.matching, cls.faults));
    const Automorphism g{{2, 0, 3, 1}, 0b0110};
    CHECK(is_case_a(g.apply(a.matching), g.apply(a.faults)));
}

TEST_CASE("the Q_3 exceptions are exactly the infeasible classes") {
    for (const auto& cls : enumerate_classes(3, 2, 1)) {
        const auto c = q3_cycle_two_edges_one_fault(cls.matching, cls.faults);
        CHECK(c.has_value() != is_q3_exception(cls.matching, cls.faults));
        if (c) CHECK(validate_cycle(*c, cls.matching, cls.faults).pass());
    }
}

TEST_CASE("q3_path_through_matching") {
    CHECK(is_ham_path(q3_path_through_matching(0, 1, {})));
    CHECK_THROWS_AS(q3_path_through_matching(0, 7, EdgeSet{E(0, 1)}), PreconditionError);
    int checked = 0;
    for (int m = 0; m <= 3; ++m)
        for (const auto& inst : enumerate_instances(3, m, 0, false)) {
            for (Vertex u = 0; u < 8; ++u) {
                bool covered = false;
                for (const auto& e : inst.matching) covered = covered || e.has(u);
                if (covered) continue;
                for (Vertex v = 0; v < 8; ++v) {
                    if (hamming_distance(u, v) % 2 == 0) continue;
                    const HamPath p = q3_path_through_matching(u, v, inst.matching);
                    REQUIRE(is_ham_path(p, inst.matching));
                    REQUIRE(p.front() == u);
                    REQUIRE(p.back() == v);
                    ++checked;
                }
            }
        }
    CHECK(checked > 0);
}

TEST_CASE("matching-vertex classes of Q_3 by matching size") {
    CHECK(count_matching_vertex_classes(3, 1) == 2);
    CHECK(count_matching_vertex_classes(3, 2) == 4);
    CHECK(count_matching_vertex_classes(3, 3) == 3);
}

TEST_CASE("base_cycle_small on every matching of Q_2, Q_3 and Q_4") {
    CHECK(normalize(base_cycle_small(2, EdgeSet{E(0, 1)})).seq == std::vector<Vertex>{0, 1, 3, 2});
    for (int n = 2; n <= 4; ++n)
        for (int m = 0; m <= static_cast<int>(num_vertices(n) / 2); ++m)
            for (const auto& cls : enumerate_classes(n, m, 0)) {
                const HamCycle c = base_cycle_small(n, cls.matching);
                REQUIRE(validate_cycle(c, cls.matching, {}).pass());
            }
}

TEST_CASE("at most one bad edge per matching of size three, one bad class overall") {
    std::set<InstanceClass> bad_classes;
    std::map<InstanceClass, std::set<InstanceClass>> bad_by_matching;
    for (const auto& inst : enumerate_instances(3, 3, 0, false)) {
        const InstanceClass mc = canonicalize(3, inst.matching, {});
        for (const auto& e : all_edges(3)) {
            if (inst.matching.contains(e)) continue;
            const auto c = q3_matching_plus_edge(inst.matching, e);
            EdgeSet with_e = inst.matching;
            with_e.insert(e);
            const bool feasible = some_cycle_contains(with_e);
            CHECK(c.has_value() == feasible);
            if (c) {
                CHECK(validate_cycle(*c, inst.matching, {}).pass());
                CHECK(c->edges().contains(e));
            } else {
                const InstanceClass joint = canonicalize(3, inst.matching, EdgeSet{e});
                bad_classes.insert(joint);
                bad_by_matching[mc].insert(joint);
            }
        }
    }
    CHECK(bad_classes.size() == 1);
    for (const auto& [mc, bad] : bad_by_matching) CHECK(bad.size() <= 1);
}

TEST_CASE("q4_base with two edges and two faults") {
    for (const auto& cls : enumerate_classes(4, 2, 2)) {
        ConstructionTrace t;
        const BaseOutcome r = q4_base(cls.matching, cls.faults, Q4Mode::case_split, &t);
        REQUIRE(r.cycle.has_value());
        CHECK(validate_cycle(*r.cycle, cls.matching, cls.faults).pass());
        CHECK_FALSE(t.labels().empty());
    }
}

TEST_CASE("q4_base with four edges and one fault fails only on the exceptional class") {
    int exceptional = 0;
    for (const auto& cls : enumerate_classes(4, 4, 1)) {
        const BaseOutcome r = q4_base(cls.matching, cls.faults);
        if (r.case_a()) {
            ++exceptional;
            CHECK(is_case_a(cls.matching, cls.faults));
        } else {
            CHECK(validate_cycle(*r.cycle, cls.matching, cls.faults).pass());
        }
        CHECK(q4_base(cls.matching, cls.faults, Q4Mode::pure_solver).case_a() == r.case_a());
    }
    CHECK(exceptional == 1);
}

TEST_CASE("q4_base with six edges and no faults") {
    for (const auto& cls : enumerate_classes(4, 6, 0)) {
        const BaseOutcome r = q4_base(cls.matching, cls.faults);
        REQUIRE(r.cycle.has_value());
        CHECK(validate_cycle(*r.cycle, cls.matching, {}).pass());
    }
    CHECK_THROWS_AS(q4_base(EdgeSet{E(0, 1), E(2, 3), E(4, 5)}, EdgeSet{E(8, 9), E(10, 11)}), PreconditionError);
}

TEST_CASE("q5_choose_dimension without faults") {
    const EdgeSet m{E(0, 1), E(2, 3), E(4, 6), E(8, 12)};
    const int j = q5_choose_dimension(m, {});
    CHECK(m.count_in_dim(j) <= 1);
}

TEST_CASE("q5_choose_dimension avoids a half that is the exceptional class") {
    const InstanceClass& a = exception_catalog().q4_class;
    for (int side = 0; side <= 1; ++side)
        for (int j = 0; j < 5; ++j) {
            const SubcubeSplit s(5, j);
            const EdgeSet m = s.lift(a.matching, side);
            const EdgeSet f = s.lift(a.faults, side);
            const int k = q5_choose_dimension(m, f);
            CHECK(m.unite(f).count_in_dim(k) <= 1);
            const SplitParts p = split(5, k, m, f);
            for (int h = 0; h <= 1; ++h) CHECK_FALSE(is_case_a(p.matching_half[h], p.faults_half[h]));
        }
}

TEST_CASE("q5_choose_dimension with eight edges") {
    const EdgeSet m{E(0, 1), E(2, 3), E(4, 5), E(6, 7), E(8, 10), E(9, 11), E(16, 20), E(17, 21)};
    const int j = q5_choose_dimension(m, {});
    CHECK(m.count_in_dim(j) <= 1);
}

TEST_CASE("base case labels are listed") {
    CHECK(base_case_labels().size() >= 10);
}
