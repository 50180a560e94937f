#include <doctest.h>

#include <random>
#include <set>

#include "hcube/basecases.hpp"
#include "hcube/constructor.hpp"
#include "hcube/errors.hpp"
#include "hcube/primitives.hpp"
#include "hcube/verify.hpp"
#include "targeted.hpp"

using namespace hcube;
using hcube::testing::Extra;
using hcube::testing::targeted_matchings;

namespace {

Edge E(Vertex a, Vertex b) { return Edge::between(a, b); }

const HamCycle kSquare{2, {0, 1, 3, 2}};

}  // namespace

TEST_CASE("merge_cycles joins two squares into a cycle of Q_3") {
    const SubcubeSplit s(3, 2);
    std::set<EdgeSet> seen;
    for (const auto& uv : kSquare.edges()) {
        const HamCycle c = merge_cycles(kSquare, kSquare, uv, s, 0);
        CHECK(c.seq.size() == 8);
        CHECK(validate_cycle(c, {}, {}).pass());
        CHECK_FALSE(c.edges().contains(s.lift(uv, 0)));
        CHECK(c.edges().contains(E(s.lift(uv.lo, 0), s.lift(uv.lo, 1))));
        seen.insert(c.edges());
    }
    CHECK(seen.size() == 4);
    const HamCycle other{2, {0, 2, 3, 1}};
    CHECK_NOTHROW(merge_cycles(kSquare, other, E(0, 1), s, 1));
}

TEST_CASE("merge_cycle_path closes a square with a spanning path") {
    const SubcubeSplit s(3, 0);
    const HamPath p{2, {0, 2, 3, 1}};
    const HamCycle c = merge_cycle_path(kSquare, p, E(0, 1), s, 0);
    CHECK(validate_cycle(c, {}, {}).pass());
    const HamPath reversed{2, {1, 3, 2, 0}};
    CHECK(merge_cycle_path(kSquare, reversed, E(0, 1), s, 0).edges() == c.edges());
    CHECK_THROWS_AS(merge_cycle_path(kSquare, p, E(1, 3), s, 0), PreconditionError);
}

TEST_CASE("merge_cycle_two_paths") {
    const SubcubeSplit s(3, 2);
    const SpanningPathPair pair = spanning_two_paths(2, 0, 1, 2, 3, true);
    const HamCycle c = merge_cycle_two_paths(kSquare, pair, EdgeSet{E(0, 1), E(2, 3)}, {}, s, 0);
    CHECK(validate_cycle(c, {}, {}).pass());
    CHECK(c.edges().contains(E(4, 5)));
    CHECK_THROWS_AS(merge_cycle_two_paths(kSquare, pair, EdgeSet{E(0, 1)}, {}, s, 0), PreconditionError);
}

TEST_CASE("extend_matching examples") {
    CHECK(normalize(extend_matching(2, {})).seq == std::vector<Vertex>{0, 1, 3, 2});
    CHECK_THROWS_AS(extend_matching(2, EdgeSet{E(0, 1), E(2, 3), E(0, 2)}), PreconditionError);
    CHECK_THROWS_AS(extend_matching(3, EdgeSet{E(0, 1), E(0, 2)}), PreconditionError);
    CHECK_THROWS_AS(extend_matching(3, EdgeSet{E(0, 1), E(2, 3), E(4, 5), E(6, 7), E(8, 9)}), ArgumentError);
}

TEST_CASE("extend_matching on every class of Q_4") {
    for (int m = 0; m <= 7; ++m)
        for (const auto& cls : enumerate_classes(4, m, 0))
            REQUIRE(validate_cycle(extend_matching(4, cls.matching), cls.matching, {}).pass());
}

TEST_CASE("extend_matching at the bound for n = 5") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const EdgeSet m = random_matching(5, 9, rng);
        ConstructionTrace t;
        const HamCycle c = extend_matching(5, m, &t);
        REQUIRE(validate_cycle(c, m, {}).pass());
        CHECK_FALSE(t.labels().empty());
    }
}

TEST_CASE("targeted matchings reach the reinsertion branches") {
    std::set<std::string> labels;
    for (int n : {5, 6})
        for (Extra x : {Extra::none, Extra::other_half, Extra::crossing, Extra::one_more})
            for (const auto& m : targeted_matchings(n, x, 40, 7 + n)) {
                ConstructionTrace t;
                REQUIRE(validate_cycle(extend_matching(n, m, &t), m, {}).pass());
                for (const auto& l : t.labels()) labels.insert(l);
            }
    for (const char* l : {"Extend/Case1/OnCycle", "Extend/Case1/NoCross", "Extend/Case1/Cross", "Extend/Case2/BothOnCycle",
                          "Extend/Case2/OneOnCycle"})
        CHECK_MESSAGE(labels.count(l) == 1, l);
}

TEST_CASE("extend_matching_faulty examples") {
    for (const auto& cls : enumerate_classes(4, 1, 2)) {
        ConstructionTrace t;
        const FaultyOutcome r = extend_matching_faulty(4, cls.matching, cls.faults, &t);
        REQUIRE(r.cycle.has_value());
        CHECK(validate_cycle(*r.cycle, cls.matching, cls.faults).pass());
    }
    const InstanceClass& a = exception_catalog().q4_class;
    CHECK(extend_matching_faulty(4, a.matching, a.faults).case_a());

    std::mt19937_64 rng(5);
    const EdgeSet m = random_matching(6, 10, rng);
    ConstructionTrace t;
    const FaultyOutcome r = extend_matching_faulty(6, m, {}, &t);
    REQUIRE(r.cycle.has_value());
    CHECK(validate_cycle(*r.cycle, m, {}).pass());
    REQUIRE_FALSE(t.labels().empty());
    CHECK(t.labels().front() == "Faulty/NoFaults");
}

TEST_CASE("extend_matching_faulty rejects instances outside the bounds") {
    CHECK_THROWS_AS(extend_matching_faulty(4, {}, {}), PreconditionError);
    CHECK_THROWS_AS(extend_matching_faulty(4, EdgeSet{E(0, 1), E(2, 3), E(4, 5)}, EdgeSet{E(8, 9), E(10, 11)}),
                    PreconditionError);
    CHECK_THROWS_AS(extend_matching_faulty(4, EdgeSet{E(0, 1)}, EdgeSet{E(0, 1)}), PreconditionError);
    CHECK_THROWS_AS(extend_matching_faulty(3, EdgeSet{E(0, 1)}, {}), ArgumentError);
}

TEST_CASE("extend_matching_faulty on sampled instances of Q_5 and Q_6") {
    std::mt19937_64 rng(31);
    for (int n : {5, 6})
        for (int trial = 0; trial < 150; ++trial) {
            const int m_size = 1 + static_cast<int>(rng() % (2 * n - 2));
            const int f_size = n - 1 - (m_size + 1) / 2;
            const EdgeSet m = random_matching(n, m_size, rng);
            const EdgeSet f = random_edges(n, f_size, m, rng);
            const FaultyOutcome r = extend_matching_faulty(n, m, f);
            REQUIRE(r.cycle.has_value());
            CHECK(validate_cycle(*r.cycle, m, f).pass());
        }
}

TEST_CASE("the exceptional class lifted into Q_5 is still solvable") {
    const InstanceClass& a = exception_catalog().q4_class;
    for (int j = 0; j < 5; ++j) {
        const SubcubeSplit s(5, j);
        const EdgeSet m = s.lift(a.matching, 1);
        const EdgeSet f = s.lift(a.faults, 1);
        const FaultyOutcome r = extend_matching_faulty(5, m, f);
        REQUIRE(r.cycle.has_value());
        CHECK(validate_cycle(*r.cycle, m, f).pass());
    }
}

TEST_CASE("construction labels are distinct") {
    const auto& labels = construction_case_labels();
    CHECK(std::set<std::string>(labels.begin(), labels.end()).size() == labels.size());
}
