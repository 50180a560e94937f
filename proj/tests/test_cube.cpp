#include <doctest.h>

#include <queue>
#include <random>

#include "hcube/cube.hpp"
#include "hcube/errors.hpp"
#include "hcube/verify.hpp"

using namespace hcube;

TEST_CASE("neighbor flips exactly one bit") {
    CHECK(neighbor(3, 0b000, 0) == 0b001);
    CHECK(neighbor(3, 0b101, 2) == 0b001);
    for (int n = 1; n <= 6; ++n)
        for (Vertex v = 0; v < num_vertices(n); ++v)
            for (int i = 0; i < n; ++i) CHECK(neighbor(n, neighbor(n, v, i), i) == v);
    CHECK_THROWS_AS(neighbor(3, 0, 3), ArgumentError);
    CHECK_THROWS_AS(neighbor(3, 0, -1), ArgumentError);
}

TEST_CASE("hamming distance") {
    CHECK(hamming_distance(0b000, 0b101) == 2);
    CHECK(hamming_distance(0b110, 0b110) == 0);
    CHECK(hamming_distance(0b0110, 0b1001) == 4);
}

TEST_CASE("hamming distance equals BFS distance") {
    for (int n = 1; n <= 6; ++n) {
        for (Vertex s = 0; s < num_vertices(n); s += 7) {
            std::vector<int> dist(num_vertices(n), -1);
            std::queue<Vertex> q;
            dist[s] = 0;
            q.push(s);
            while (!q.empty()) {
                const Vertex v = q.front();
                q.pop();
                for (int i = 0; i < n; ++i) {
                    const Vertex w = neighbor(n, v, i);
                    if (dist[w] < 0) {
                        dist[w] = dist[v] + 1;
                        q.push(w);
                    }
                }
            }
            for (Vertex v = 0; v < num_vertices(n); ++v) CHECK(dist[v] == hamming_distance(s, v));
        }
    }
}

TEST_CASE("edges are normalised") {
    const Edge e = Edge::between(0b101, 0b001);
    CHECK(e.lo == 0b001);
    CHECK(e.hi == 0b101);
    CHECK(e.dim == 2);
    CHECK(Edge::along(0b011, 1) == Edge::between(0b001, 0b011));
    CHECK_THROWS_AS(Edge::between(0, 3), ArgumentError);
    CHECK_THROWS_AS(Edge::between(2, 2), ArgumentError);
}

TEST_CASE("edge distance") {
    CHECK(edge_distance(Edge::between(0b000, 0b001), Edge::between(0b000, 0b010)) == 0);
    CHECK(edge_distance(Edge::between(0b000, 0b001), Edge::between(0b110, 0b111)) == 2);
}

TEST_CASE("every edge of Q_3 has a unique partner at distance 2 and the pairing is an involution") {
    const EdgeSet all = all_edges(3);
    CHECK(all.size() == 12);
    for (const auto& e : all) {
        int count = 0;
        Edge partner{};
        for (const auto& f : all)
            if (edge_distance(e, f) == 2) {
                ++count;
                partner = f;
            }
        REQUIRE(count == 1);
        CHECK(partner != e);
        int back = 0;
        for (const auto& g : all)
            if (edge_distance(partner, g) == 2) {
                ++back;
                CHECK(g == e);
            }
        CHECK(back == 1);
    }
}

TEST_CASE("split of a single edge in Q_2") {
    const EdgeSet m{Edge::between(0b00, 0b01)};
    const SplitParts p = split(2, 1, m, {});
    CHECK(p.matching_half[0] == EdgeSet{Edge::between(0, 1)});
    CHECK(p.matching_half[1].empty());
    CHECK(p.matching_cross.empty());
    CHECK(p.faults_half[0].empty());
    CHECK(p.faults_half[1].empty());
    CHECK(p.faults_cross.empty());
}

TEST_CASE("a perfect matching of one dimension class crosses entirely") {
    for (int j = 0; j < 4; ++j) {
        EdgeSet m;
        for (Vertex v = 0; v < 16; ++v)
            if (!((v >> j) & 1U)) m.insert(Edge::along(v, j));
        const SplitParts p = split(4, j, m, {});
        CHECK(p.matching_cross == m);
        CHECK(p.matching_half[0].empty());
        CHECK(p.matching_half[1].empty());
    }
}

TEST_CASE("split then lift reconstructs the instance") {
    std::mt19937_64 rng(3);
    for (int n = 2; n <= 6; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            const EdgeSet m = random_matching(n, std::min(n, 1 << (n - 1)), rng);
            const EdgeSet f = random_edges(n, n - 1, m, rng);
            for (int j = 0; j < n; ++j) {
                const SplitParts p = split(n, j, m, f);
                const SubcubeSplit& s = p.split;
                EdgeSet mm = p.matching_cross;
                mm = mm.unite(s.lift(p.matching_half[0], 0)).unite(s.lift(p.matching_half[1], 1));
                EdgeSet ff = p.faults_cross;
                ff = ff.unite(s.lift(p.faults_half[0], 0)).unite(s.lift(p.faults_half[1], 1));
                CHECK(mm == m);
                CHECK(ff == f);
            }
        }
    }
}

TEST_CASE("project and lift are inverse on vertices and edges") {
    for (int n = 2; n <= 6; ++n) {
        for (int j = 0; j < n; ++j) {
            const SubcubeSplit s(n, j);
            for (Vertex v = 0; v < num_vertices(n); ++v) CHECK(s.lift(s.project(v), s.side(v)) == v);
            for (const auto& e : all_edges(n)) {
                if (s.crosses(e)) continue;
                const Edge pe = s.project(e);
                CHECK(pe.valid_in(n - 1));
                CHECK(s.lift(pe, s.side(e.lo)) == e);
            }
        }
    }
}

TEST_CASE("separate_disjoint_edges examples") {
    CHECK(separate_disjoint_edges(3, Edge::between(0b000, 0b001), Edge::between(0b010, 0b110)) == 1);
    CHECK(separate_disjoint_edges(2, Edge::between(0b00, 0b01), Edge::between(0b10, 0b11)) == 1);
}

TEST_CASE("separate_disjoint_edges satisfies its post-condition on every disjoint pair") {
    for (int n = 2; n <= 4; ++n) {
        const EdgeSet all = all_edges(n);
        for (const auto& e : all)
            for (const auto& f : all) {
                if (e.touches(f)) continue;
                const int j = separate_disjoint_edges(n, e, f);
                const int be = static_cast<int>((e.lo >> j) & 1U);
                CHECK(be == static_cast<int>((e.hi >> j) & 1U));
                const int bf = static_cast<int>((f.lo >> j) & 1U);
                CHECK(bf == static_cast<int>((f.hi >> j) & 1U));
                CHECK(be != bf);
            }
    }
}

TEST_CASE("automorphisms preserve adjacency and form a group") {
    CHECK(Automorphism::group_order(3) == 48);
    CHECK(Automorphism::group_order(6) == 46080);
    std::uint64_t count = 0;
    for_each_automorphism(3, [&](const Automorphism& g) {
        ++count;
        for (const auto& e : all_edges(3)) CHECK(hamming_distance(g.apply(e.lo), g.apply(e.hi)) == 1);
        const Automorphism inv = g.inverse();
        CHECK(inv.compose(g) == Automorphism::identity(3));
        CHECK(g.compose(inv) == Automorphism::identity(3));
    });
    CHECK(count == 48);
}

TEST_CASE("canonicalize identifies single edges by edge-transitivity") {
    const InstanceClass a = canonicalize(3, EdgeSet{Edge::between(0b000, 0b001)}, {});
    const InstanceClass b = canonicalize(3, EdgeSet{Edge::between(0b010, 0b110)}, {});
    CHECK(a == b);
}

TEST_CASE("matching classes of Q_3 by size") {
    CHECK(enumerate_classes(3, 2, 0).size() == 3);
    CHECK(enumerate_classes(3, 3, 0).size() == 3);
}

TEST_CASE("canonicalize is idempotent and constant on orbits") {
    std::mt19937_64 rng(5);
    for (int n = 3; n <= 5; ++n) {
        const EdgeSet m = random_matching(n, 3, rng);
        const EdgeSet f = random_edges(n, 1, m, rng);
        const InstanceClass c = canonicalize(n, m, f);
        CHECK(canonicalize(n, c.matching, c.faults) == c);
        int seen = 0;
        for_each_automorphism(n, [&](const Automorphism& g) {
            if (++seen % 37 != 0) return;
            CHECK(canonicalize(n, g.apply(m), g.apply(f)) == c);
        });
    }
}

TEST_CASE("pruned canonicalisation agrees with brute force") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const EdgeSet m = random_matching(4, 3, rng);
        const EdgeSet f = random_edges(4, 1, m, rng);
        CHECK(canonicalize(4, m, f, CanonicalMode::pruned) == canonicalize(4, m, f));
    }
}

TEST_CASE("dimension bounds") {
    CHECK_THROWS_AS(check_dimension(0), ArgumentError);
    CHECK_THROWS_AS(check_dimension(17), ArgumentError);
    CHECK_NOTHROW(check_dimension(16));
}
