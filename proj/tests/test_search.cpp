#include <doctest.h>

#include "hcube/search.hpp"
#include "hcube/structures.hpp"

using namespace hcube;

namespace {

Edge E(Vertex a, Vertex b) { return Edge::between(a, b); }

}  // namespace

TEST_CASE("the Hamiltonian cycle of Q_2") {
    const SolveResult r = solve(PathQuery{2, std::nullopt, {}, {}});
    REQUIRE(r.found());
    CHECK(normalize(HamCycle{2, r.seq}).seq == std::vector<Vertex>{0, 1, 3, 2});
}

TEST_CASE("an exceptional two-edge one-fault configuration of Q_3 is infeasible") {
    const EdgeSet m{E(0, 1), E(2, 6)};
    const EdgeSet f{E(5, 7)};
    CHECK(solve(PathQuery{3, std::nullopt, m, f}).status == SolveStatus::infeasible);
}

TEST_CASE("required edges that are not a linear forest are rejected immediately") {
    const EdgeSet claw{E(0, 1), E(0, 2), E(0, 4)};
    const SolveResult r = solve(PathQuery{3, std::nullopt, claw, {}});
    CHECK(r.status == SolveStatus::infeasible);
    CHECK(r.nodes <= 1);
    const EdgeSet square{E(0, 1), E(1, 3), E(3, 2), E(2, 0)};
    CHECK(solve(PathQuery{3, std::nullopt, square, {}}).status == SolveStatus::infeasible);
}

TEST_CASE("paths respect endpoints, required and forbidden edges") {
    const PathQuery q{3, VertexPair{0, 7}, EdgeSet{E(2, 6)}, EdgeSet{E(0, 1)}};
    const SolveResult r = solve(q);
    REQUIRE(r.found());
    const HamPath p{3, r.seq};
    CHECK(p.front() == 0);
    CHECK(p.back() == 7);
    CHECK(is_ham_path(p, q.required, q.forbidden));
}

TEST_CASE("even-distance endpoints admit no Hamiltonian path") {
    CHECK(solve(PathQuery{3, VertexPair{0, 3}, {}, {}}).status == SolveStatus::infeasible);
}

TEST_CASE("a tiny budget is reported as exhausted, not infeasible") {
    const SolveResult r = solve(PathQuery{6, std::nullopt, {}, {}}, SearchBudget{3});
    CHECK(r.status == SolveStatus::budget_exceeded);
}

TEST_CASE("spanning pairs of Q_2 and the pinned exception of Q_3") {
    const SolveResult two = solve_spanning_pair(2, 0, 1, 2, 3, true);
    REQUIRE(two.found());
    CHECK(two.seq == std::vector<Vertex>{0, 1, 2, 3});

    const SolveResult pinned = solve_spanning_pair(3, 0, 1, 6, 7, true);
    CHECK(pinned.status == SolveStatus::infeasible);
    const SolveResult free = solve_spanning_pair(3, 0, 1, 6, 7, false);
    CHECK(free.found());
}

TEST_CASE("cycles of Q_5 through a prescribed matching") {
    const EdgeSet m{E(0, 1), E(2, 6), E(12, 28), E(7, 15)};
    const SolveResult r = solve(PathQuery{5, std::nullopt, m, {}});
    REQUIRE(r.found());
    CHECK(validate_cycle(HamCycle{5, r.seq}, m, {}).pass());
}
