#include "hcube/primitives.hpp"

#include <sstream>
#include <string>

#include "hcube/errors.hpp"

namespace hcube {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw PreconditionError(what);
}

void check_vertex(int n, Vertex v) {
    if (v >= num_vertices(n)) throw ArgumentError("vertex " + std::to_string(v) + " outside Q_" + std::to_string(n));
}

void check_edges(int n, const EdgeSet& s) {
    for (const auto& e : s)
        if (!e.valid_in(n)) throw ArgumentError("edge outside Q_" + std::to_string(n));
}

std::vector<Vertex> guaranteed(const PathQuery& q, const char* who) {
    const SolveResult r = solve(q);
    if (r.found()) return r.seq;
    std::ostringstream os;
    os << who << ": search "
       << (r.status == SolveStatus::budget_exceeded ? "exhausted its budget" : "reported infeasible")
       << " for an instance whose solution is guaranteed to exist (n=" << q.n << ", required=" << q.required
       << ", forbidden=" << q.forbidden << ")";
    throw InternalInvariantError(os.str());
}

HamCycle checked_cycle(int n, std::vector<Vertex> seq, const EdgeSet& required, const EdgeSet& forbidden,
                       const char* who) {
    HamCycle c{n, std::move(seq)};
    const auto verdict = validate_cycle(c, required, forbidden);
    // `required` may be a linear forest rather than a matching; only (a), (b)
    // and the containment/avoidance checks matter here.
    if (!verdict.adjacency || !verdict.coverage || !verdict.avoids_faults)
        throw InternalInvariantError(std::string(who) + ": produced an invalid cycle");
    const EdgeSet used = c.edges();
    for (const auto& e : required)
        if (!used.contains(e)) throw InternalInvariantError(std::string(who) + ": cycle misses a required edge");
    return c;
}

void build_havel(int n, Vertex x, Vertex y, std::vector<Vertex>& out) {
    if (n == 1) {
        out.push_back(x);
        out.push_back(y);
        return;
    }
    const int j = __builtin_ctz(x ^ y);
    const SubcubeSplit s(n, j);
    const int side_x = s.side(x);
    const Vertex xp = s.project(x);
    const Vertex yp = s.project(y);
    Vertex z = xp;
    for (int i = 0; i < n - 1; ++i) {
        z = xp ^ (Vertex{1} << i);
        if (z != yp) break;
    }
    std::vector<Vertex> first;
    build_havel(n - 1, xp, z, first);
    std::vector<Vertex> second;
    build_havel(n - 1, z, yp, second);
    for (Vertex w : first) out.push_back(s.lift(w, side_x));
    for (Vertex w : second) out.push_back(s.lift(w, 1 - side_x));
}

}  // namespace

HamPath havel_path(int n, Vertex x, Vertex y) {
    check_dimension(n);
    check_vertex(n, x);
    check_vertex(n, y);
    require(hamming_distance(x, y) % 2 == 1, "havel_path: d(x, y) must be odd");
    HamPath p{n, {}};
    p.seq.reserve(num_vertices(n));
    build_havel(n, x, y, p.seq);
    if (!is_ham_path(p) || p.front() != x || p.back() != y) {
        p.seq = guaranteed(PathQuery{n, VertexPair{x, y}, {}, {}}, "havel_path");
    }
    return p;
}

HamPath path_through_edge(int n, Vertex x, Vertex y, const Edge& e) {
    check_dimension(n);
    check_vertex(n, x);
    check_vertex(n, y);
    check_edges(n, EdgeSet{e});
    require(n >= 2, "path_through_edge: n >= 2");
    require(hamming_distance(x, y) % 2 == 1, "path_through_edge: d(x, y) must be odd");
    require(!(e.has(x) && e.has(y)), "path_through_edge: e must differ from xy");
    const EdgeSet req{e};
    HamPath p{n, guaranteed(PathQuery{n, VertexPair{x, y}, req, {}}, "path_through_edge")};
    if (!is_ham_path(p, req)) throw InternalInvariantError("path_through_edge: invalid path");
    return p;
}

HamPath path_avoiding_faults(int n, Vertex u, Vertex v, const EdgeSet& faults) {
    check_dimension(n);
    check_vertex(n, u);
    check_vertex(n, v);
    check_edges(n, faults);
    require(n >= 3, "path_avoiding_faults: n >= 3");
    require(hamming_distance(u, v) % 2 == 1, "path_avoiding_faults: d(u, v) must be odd");
    require(faults.size() <= 1, "path_avoiding_faults: at most one faulty edge");
    if (faults.empty()) return havel_path(n, u, v);
    HamPath p{n, guaranteed(PathQuery{n, VertexPair{u, v}, {}, faults}, "path_avoiding_faults")};
    if (!is_ham_path(p, {}, faults)) throw InternalInvariantError("path_avoiding_faults: invalid path");
    return p;
}

bool is_pinned_pair_exception(int n, Vertex x, Vertex y, Vertex u, Vertex v) {
    return n == 3 && hamming_distance(x, y) == 1 && hamming_distance(u, v) == 1 &&
           edge_distance(Edge::between(x, y), Edge::between(u, v)) == 2;
}

SpanningPathPair spanning_two_paths(int n, Vertex x, Vertex y, Vertex u, Vertex v, bool pin_xy) {
    check_dimension(n);
    for (Vertex a : {x, y, u, v}) check_vertex(n, a);
    require(n >= 2, "spanning_two_paths: n >= 2");
    require(x != y && x != u && x != v && y != u && y != v && u != v,
            "spanning_two_paths: endpoints must be pairwise distinct");
    require(hamming_distance(x, y) % 2 == 1 && hamming_distance(u, v) % 2 == 1,
            "spanning_two_paths: both endpoint pairs need odd distance");
    if (pin_xy) {
        require(hamming_distance(x, y) == 1, "spanning_two_paths: pinning needs d(x, y) = 1");
        if (is_pinned_pair_exception(n, x, y, u, v))
            throw ExceptionalCaseError("spanning_two_paths: no pinned pair when n = 3, d(u,v) = 1, d(xy,uv) = 2");
    }
    const SolveResult r = solve_spanning_pair(n, x, y, u, v, pin_xy);
    if (!r.found())
        throw InternalInvariantError(std::string("spanning_two_paths: search ") +
                                     (r.status == SolveStatus::budget_exceeded ? "exhausted its budget"
                                                                               : "reported infeasible"));
    SpanningPathPair pp{n, {}, {}};
    std::size_t cut = 0;
    while (r.seq[cut] != y) ++cut;
    pp.first.assign(r.seq.begin(), r.seq.begin() + static_cast<std::ptrdiff_t>(cut + 1));
    pp.second.assign(r.seq.begin() + static_cast<std::ptrdiff_t>(cut + 1), r.seq.end());
    if (!is_spanning_pair(pp) || pp.first.front() != x || pp.second.front() != u || pp.second.back() != v ||
        (pin_xy && pp.first.size() != 2))
        throw InternalInvariantError("spanning_two_paths: invalid pair");
    return pp;
}

HamCycle cycle_through_forest(int n, const EdgeSet& forest) {
    check_dimension(n);
    check_edges(n, forest);
    require(n >= 2, "cycle_through_forest: n >= 2");
    require(forest.size() <= static_cast<std::size_t>(2 * n - 3), "cycle_through_forest: |E| <= 2n - 3");
    require(is_linear_forest(forest), "cycle_through_forest: E must induce a linear forest");
    return checked_cycle(n, guaranteed(PathQuery{n, std::nullopt, forest, {}}, "cycle_through_forest"), forest, {},
                         "cycle_through_forest");
}

HamCycle cycle_avoiding_faults_through_edge(int n, const Edge& e, const EdgeSet& faults) {
    check_dimension(n);
    check_edges(n, EdgeSet{e});
    check_edges(n, faults);
    require(n >= 3, "cycle_avoiding_faults_through_edge: n >= 3");
    require(faults.size() <= static_cast<std::size_t>(n - 2), "cycle_avoiding_faults_through_edge: |F| <= n - 2");
    require(!faults.contains(e), "cycle_avoiding_faults_through_edge: e must not be faulty");
    const EdgeSet req{e};
    return checked_cycle(n, guaranteed(PathQuery{n, std::nullopt, req, faults}, "cycle_avoiding_faults_through_edge"),
                         req, faults, "cycle_avoiding_faults_through_edge");
}

HamCycle cycle_through_forest_avoiding_faults(int n, const EdgeSet& forest, const EdgeSet& faults) {
    check_dimension(n);
    check_edges(n, forest);
    check_edges(n, faults);
    require(n >= 2, "cycle_through_forest_avoiding_faults: n >= 2");
    require(!forest.empty() && forest.size() <= static_cast<std::size_t>(2 * n - 3),
            "cycle_through_forest_avoiding_faults: 1 <= |E| <= 2n - 3");
    require(static_cast<long>(faults.size()) <= static_cast<long>(n) - 2 - static_cast<long>(forest.size() / 2),
            "cycle_through_forest_avoiding_faults: |F| <= n - 2 - floor(|E|/2)");
    require(forest.disjoint(faults), "cycle_through_forest_avoiding_faults: E and F overlap");
    require(is_linear_forest(forest), "cycle_through_forest_avoiding_faults: E must induce a linear forest");
    return checked_cycle(n,
                         guaranteed(PathQuery{n, std::nullopt, forest, faults}, "cycle_through_forest_avoiding_faults"),
                         forest, faults, "cycle_through_forest_avoiding_faults");
}

HamCycle complementary_perfect_matching(int n, const EdgeSet& perfect) {
    check_dimension(n);
    check_edges(n, perfect);
    if (n > 4) throw UnsupportedError("complementary_perfect_matching: only 2 <= n <= 4");
    require(n >= 2, "complementary_perfect_matching: n >= 2");
    require(is_perfect_matching(n, perfect), "complementary_perfect_matching: M must be a perfect matching");
    HamCycle c = checked_cycle(n, guaranteed(PathQuery{n, std::nullopt, perfect, {}}, "complementary_perfect_matching"),
                               perfect, {}, "complementary_perfect_matching");
    if (!is_perfect_matching(n, c.edges().minus(perfect)))
        throw InternalInvariantError("complementary_perfect_matching: complement is not a perfect matching");
    return c;
}

}  // namespace hcube
