#include "hcube/basecases.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

#include "hcube/constructor.hpp"
#include "hcube/errors.hpp"
#include "hcube/primitives.hpp"
#include "hcube/search.hpp"
#include "hcube/verify.hpp"

namespace hcube {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw PreconditionError(what);
}

void check_edges_in(int n, const EdgeSet& s, const char* what) {
    for (const auto& e : s)
        if (!e.valid_in(n)) throw ArgumentError(std::string(what) + " edge outside Q_" + std::to_string(n));
}

int ceil_half(std::size_t k) { return static_cast<int>((k + 1) / 2); }

// Exhaustive feasibility through the search backend; budget exhaustion is an
// engineering failure, never a verdict.
std::optional<HamCycle> solve_cycle(int n, const EdgeSet& required, const EdgeSet& forbidden, const char* who) {
    const SolveResult r = solve(PathQuery{n, std::nullopt, required, forbidden});
    if (r.status == SolveStatus::budget_exceeded) throw BudgetExceeded(std::string(who) + ": search budget exhausted");
    if (!r.found()) return std::nullopt;
    return HamCycle{n, r.seq};
}

bool single_dimension_class(const EdgeSet& a, const EdgeSet& b) {
    std::vector<int> dims;
    for (const auto& e : a) dims.push_back(e.dim);
    for (const auto& e : b) dims.push_back(e.dim);
    return std::adjacent_find(dims.begin(), dims.end(), std::not_equal_to<>()) == dims.end();
}

void self_check(const HamCycle& c, const EdgeSet& m, const EdgeSet& f, const char* who) {
    const CycleVerdict v = validate_cycle(c, m, f);
    if (!v.pass())
        throw InternalInvariantError(std::string(who) + ": produced cycle fails validation" +
                                     (v.problems.empty() ? "" : ": " + v.problems.front()));
}

std::string edge_list(const EdgeSet& s) {
    std::ostringstream os;
    bool first = true;
    for (const auto& e : s) {
        os << (first ? "" : ",") << e.lo << "-" << e.hi;
        first = false;
    }
    return os.str();
}

EdgeSet parse_edge_list(const std::string& text) {
    EdgeSet out;
    if (text.empty()) return out;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        const auto dash = item.find('-');
        if (dash == std::string::npos) throw ParseError("catalog: malformed edge '" + item + "'");
        try {
            out.insert(Edge::between(static_cast<Vertex>(std::stoul(item.substr(0, dash))),
                                     static_cast<Vertex>(std::stoul(item.substr(dash + 1)))));
        } catch (const std::logic_error&) {
            throw ParseError("catalog: malformed edge '" + item + "'");
        } catch (const ArgumentError&) {
            throw ParseError("catalog: '" + item + "' is not a hypercube edge");
        }
    }
    return out;
}

}  // namespace

// --- exception catalogue ----------------------------------------------------------

ExceptionCatalog build_exception_catalog() {
    ExceptionCatalog cat;
    for (const auto& c : enumerate_classes(3, 2, 1))
        if (!solve_cycle(3, c.matching, c.faults, "exception catalog")) cat.q3_classes.push_back(c);
    std::vector<InstanceClass> q4;
    for (const auto& c : enumerate_classes(4, 4, 1))
        if (!solve_cycle(4, c.matching, c.faults, "exception catalog")) q4.push_back(c);
    if (cat.q3_classes.size() != 2 || q4.size() != 1) {
        std::ostringstream os;
        os << "exception catalog: expected 2 infeasible classes in Q_3 and 1 in Q_4, found " << cat.q3_classes.size()
           << " and " << q4.size();
        throw CatalogMismatch(os.str());
    }
    cat.q4_class = q4.front();
    if (!single_dimension_class(cat.q4_class.matching, cat.q4_class.faults))
        throw CatalogMismatch("exception catalog: the Q_4 class does not lie inside one dimension class");
    return cat;
}

const ExceptionCatalog& exception_catalog() {
    static const ExceptionCatalog cat = build_exception_catalog();
    return cat;
}

std::string export_catalog(const ExceptionCatalog& c) {
    std::ostringstream os;
    auto line = [&](const InstanceClass& k) {
        os << "n=" << k.n << " M=" << edge_list(k.matching) << " F=" << edge_list(k.faults) << "\n";
    };
    for (const auto& k : c.q3_classes) line(k);
    line(c.q4_class);
    return os.str();
}

ExceptionCatalog parse_catalog(const std::string& text) {
    std::istringstream is(text);
    std::string row;
    std::vector<InstanceClass> rows;
    while (std::getline(is, row)) {
        if (row.empty() || row[0] == '#') continue;
        std::istringstream rs(row);
        std::string a, b, c, extra;
        rs >> a >> b >> c;
        if (rs >> extra || a.rfind("n=", 0) != 0 || b.rfind("M=", 0) != 0 || c.rfind("F=", 0) != 0)
            throw ParseError("catalog: malformed line '" + row + "'");
        InstanceClass k;
        try {
            k.n = std::stoi(a.substr(2));
        } catch (const std::logic_error&) {
            throw ParseError("catalog: malformed dimension in '" + row + "'");
        }
        k.matching = parse_edge_list(b.substr(2));
        k.faults = parse_edge_list(c.substr(2));
        rows.push_back(std::move(k));
    }
    if (rows.size() != 3 || rows[0].n != 3 || rows[1].n != 3 || rows[2].n != 4)
        throw ParseError("catalog: expected two n=3 lines followed by one n=4 line");
    ExceptionCatalog cat;
    cat.q3_classes = {rows[0], rows[1]};
    cat.q4_class = rows[2];
    return cat;
}

bool is_q3_exception(const EdgeSet& matching, const EdgeSet& faults) {
    if (matching.size() != 2 || faults.size() != 1) return false;
    check_edges_in(3, matching, "matching");
    check_edges_in(3, faults, "fault");
    const InstanceClass k = canonicalize(3, matching, faults);
    const auto& cls = exception_catalog().q3_classes;
    return std::find(cls.begin(), cls.end(), k) != cls.end();
}

bool is_case_a(const EdgeSet& matching, const EdgeSet& faults) {
    if (matching.size() != 4 || faults.size() != 1) return false;
    check_edges_in(4, matching, "matching");
    check_edges_in(4, faults, "fault");
    return canonicalize(4, matching, faults) == exception_catalog().q4_class;
}

// --- Q_3 ------------------------------------------------------------------------

HamPath q3_path_through_matching(Vertex u, Vertex v, const EdgeSet& matching) {
    check_edges_in(3, matching, "matching");
    if (u >= 8 || v >= 8) throw ArgumentError("q3_path_through_matching: vertex outside Q_3");
    require(is_matching(matching), "q3_path_through_matching: M must be a matching");
    require(hamming_distance(u, v) % 2 == 1, "q3_path_through_matching: d(u, v) must be odd");
    for (const auto& e : matching) require(!e.has(u), "q3_path_through_matching: u must not be covered by M");

    // Grow M to three edges avoiding u; any extension works.
    EdgeSet grown = matching;
    const EdgeSet all = all_edges(3);
    auto grow = [&](auto&& self) -> bool {
        if (grown.size() == 3) return true;
        for (const auto& e : all) {
            if (e.has(u) || grown.contains(e)) continue;
            bool clash = false;
            for (const auto& g : grown) clash = clash || g.touches(e);
            if (clash) continue;
            grown.insert(e);
            if (self(self)) return true;
            grown.erase(e);
        }
        return false;
    };
    if (!grow(grow)) throw InternalInvariantError("q3_path_through_matching: cannot extend M to three edges");

    const SolveResult r = solve(PathQuery{3, VertexPair{u, v}, grown, {}});
    if (!r.found()) throw InternalInvariantError("q3_path_through_matching: no path through the grown matching");
    HamPath p{3, r.seq};
    if (!is_ham_path(p, matching) || p.front() != u || p.back() != v)
        throw InternalInvariantError("q3_path_through_matching: invalid path");
    return p;
}

std::optional<HamCycle> q3_matching_plus_edge(const EdgeSet& matching, const Edge& e) {
    check_edges_in(3, matching, "matching");
    check_edges_in(3, EdgeSet{e}, "extra");
    require(matching.size() == 3 && is_matching(matching), "q3_matching_plus_edge: M must be a matching of size 3");
    require(!matching.contains(e), "q3_matching_plus_edge: e must not be in M");
    EdgeSet req = matching;
    req.insert(e);
    auto c = solve_cycle(3, req, {}, "q3_matching_plus_edge");
    if (c) self_check(*c, matching, {}, "q3_matching_plus_edge");
    return c;
}

std::optional<HamCycle> q3_cycle_two_edges_one_fault(const EdgeSet& matching, const EdgeSet& faults) {
    check_edges_in(3, matching, "matching");
    check_edges_in(3, faults, "fault");
    require(matching.size() == 2 && is_matching(matching), "q3_cycle_two_edges_one_fault: |M| = 2 matching");
    require(faults.size() == 1 && matching.disjoint(faults), "q3_cycle_two_edges_one_fault: |F| = 1, M ∩ F = ∅");
    auto c = solve_cycle(3, matching, faults, "q3_cycle_two_edges_one_fault");
    const bool exceptional = is_q3_exception(matching, faults);
    if (c.has_value() == exceptional)
        throw InternalInvariantError("q3_cycle_two_edges_one_fault: search disagrees with the exception catalog");
    if (c) self_check(*c, matching, faults, "q3_cycle_two_edges_one_fault");
    return c;
}

// --- small cycles ------------------------------------------------------------------

HamCycle base_cycle_small(int n, const EdgeSet& matching, ConstructionTrace* trace) {
    if (n < 2 || n > 4) throw ArgumentError("base_cycle_small: n must be 2, 3 or 4");
    check_edges_in(n, matching, "matching");
    require(is_matching(matching), "base_cycle_small: M must be a matching");

    if (is_perfect_matching(n, matching)) {
        trace_begin(trace, n, -1, "Base/Perfect");
        trace_call(trace, n, "complementary_perfect_matching");
        return complementary_perfect_matching(n, matching);
    }
    if (n <= 3) {
        trace_begin(trace, n, -1, "Base/Forest");
        trace_call(trace, n, "cycle_through_forest");
        return cycle_through_forest(n, matching);
    }

    int j = 0;
    while (j < n && matching.count_in_dim(j) > 1) ++j;
    if (j == n) throw InternalInvariantError("base_cycle_small: no dimension with |M ∩ E_j| <= 1");
    const SplitParts parts = split(n, j, matching, {});
    const SubcubeSplit& s = parts.split;
    // the half closed by a path must not be perfect
    const int side0 = is_perfect_matching(n - 1, parts.matching_half[1]) ? 1 : 0;
    const EdgeSet& m0 = parts.matching_half[side0];
    const EdgeSet& m1 = parts.matching_half[1 - side0];
    trace_begin(trace, n, j, parts.matching_cross.empty() ? "Base/Split/NoCross" : "Base/Split/Cross");

    const HamCycle c0 = base_cycle_small(n - 1, m0, trace);
    Vertex u = 0;
    Vertex v = 0;
    if (!parts.matching_cross.empty()) {
        const Edge cross = parts.matching_cross[0];
        u = s.project(s.side(cross.lo) == side0 ? cross.lo : cross.hi);
        v = neighbors_on(c0, u).second;
    } else {
        std::vector<char> covered(num_vertices(n - 1), 0);
        for (const auto& e : m1) covered[e.lo] = covered[e.hi] = 1;
        bool found = false;
        for (const auto& e : edges_in_order(c0)) {
            if (m0.contains(e)) continue;
            if (!covered[e.lo] || !covered[e.hi]) {
                u = covered[e.lo] ? e.hi : e.lo;
                v = e.other(u);
                found = true;
                break;
            }
        }
        if (!found) throw InternalInvariantError("base_cycle_small: no edge of C0 with an uncovered lift");
    }
    trace_call(trace, n, "q3_path_through_matching");
    const HamPath p1 = q3_path_through_matching(u, v, m1);
    HamCycle out = merge_cycle_path(c0, p1, Edge::between(u, v), s, side0);
    trace_surgery(trace, n, EdgeSet{s.lift(Edge::between(u, v), side0)},
                  EdgeSet{Edge::between(s.lift(u, 0), s.lift(u, 1)), Edge::between(s.lift(v, 0), s.lift(v, 1))});
    self_check(out, matching, {}, "base_cycle_small");
    return out;
}

// --- Q_4 base of the fault-tolerant theorem ------------------------------------------

namespace {

struct Halves {
    SubcubeSplit split;
    int side0;
    EdgeSet m[2];  // Q_3 coordinates, index 0 = logical half 0
    EdgeSet f[2];
    EdgeSet m_cross;
    EdgeSet f_cross;
};

Halves orient(const SplitParts& p, int side0) {
    Halves h{p.split, side0, {}, {}, {}, {}};
    h.m[0] = p.matching_half[side0];
    h.m[1] = p.matching_half[1 - side0];
    h.f[0] = p.faults_half[side0];
    h.f[1] = p.faults_half[1 - side0];
    h.m_cross = p.matching_cross;
    h.f_cross = p.faults_cross;
    return h;
}

Edge crossing_at(const Halves& h, Vertex w) {
    return Edge::between(h.split.lift(w, 0), h.split.lift(w, 1));
}

bool crossing_faulty(const Halves& h, Vertex w) { return h.f_cross.contains(crossing_at(h, w)); }

// Which side of the split an edge of Q_4 lies in, or -1 for a crossing edge.
int half_of(const SubcubeSplit& s, const Edge& e) { return s.crosses(e) ? -1 : s.side(e.lo); }

HamCycle route_two_faults(const EdgeSet& matching, const EdgeSet& faults, ConstructionTrace* trace) {
    const Edge e_raw = matching[0];
    const Edge h_raw = matching[1];
    const int j = separate_disjoint_edges(4, e_raw, h_raw);
    const SplitParts parts = split(4, j, matching, faults);
    int side0 = parts.split.side(e_raw.lo);
    if (parts.faults_half[1 - side0].size() > parts.faults_half[side0].size()) side0 = 1 - side0;
    const Halves h = orient(parts, side0);
    const Edge e = h.m[0][0];
    const Edge hh = h.m[1][0];
    const SubcubeSplit& s = h.split;

    if (h.f[1].empty()) {
        HamCycle c0{};
        Edge uv{};
        bool have = false;
        if (h.f[0].size() <= 1) {
            trace_begin(trace, 4, j, "Q4/TwoFaults/Case1");
            trace_call(trace, 4, "cycle_avoiding_faults_through_edge");
            c0 = cycle_avoiding_faults_through_edge(3, e, h.f[0]);
            for (const auto& cand : edges_in_order(c0)) {
                if (cand == e || cand == hh) continue;
                if (crossing_faulty(h, cand.lo) || crossing_faulty(h, cand.hi)) continue;
                uv = cand;
                have = true;
                break;
            }
        } else {
            trace_begin(trace, 4, j, "Q4/TwoFaults/Case1/BothFaultsInHalf");
            Edge f = h.f[0][0];
            Edge g = h.f[0][1];
            if (f == hh) std::swap(f, g);
            trace_call(trace, 4, "cycle_avoiding_faults_through_edge");
            c0 = cycle_avoiding_faults_through_edge(3, e, EdgeSet{g});
            if (c0.edges().contains(f)) {
                uv = f;
                have = true;
            } else {
                for (const auto& cand : edges_in_order(c0)) {
                    if (cand == e || cand == hh) continue;
                    uv = cand;
                    have = true;
                    break;
                }
            }
        }
        if (!have) throw InternalInvariantError("Q4/TwoFaults: no admissible surgery edge on C0");
        trace_call(trace, 4, "path_through_edge");
        const HamPath p1 = path_through_edge(3, uv.lo, uv.hi, hh);
        return merge_cycle_path(c0, p1, uv, s, side0);
    }

    trace_begin(trace, 4, j, "Q4/TwoFaults/Case2");
    trace_call(trace, 4, "cycle_avoiding_faults_through_edge");
    const HamCycle c0 = cycle_avoiding_faults_through_edge(3, e, h.f[0]);
    trace_call(trace, 4, "cycle_avoiding_faults_through_edge");
    const HamCycle c1 = cycle_avoiding_faults_through_edge(3, hh, h.f[1]);
    const EdgeSet on_c1 = c1.edges();
    for (const auto& cand : edges_in_order(c0)) {
        if (cand == e || cand == hh || !on_c1.contains(cand)) continue;
        return merge_cycles(c0, c1, cand, s, side0);
    }
    throw InternalInvariantError("Q4/TwoFaults: C0 and C1 share no usable edge");
}

HamCycle route_one_edge_per_dim(const EdgeSet& matching, const EdgeSet& faults, ConstructionTrace* trace) {
    const Edge f_raw = faults[0];
    const int j = f_raw.dim;
    const SplitParts parts = split(4, j, matching, faults);
    const int side0 = parts.matching_half[1].size() > parts.matching_half[0].size() ? 1 : 0;
    const Halves h = orient(parts, side0);
    const SubcubeSplit& s = h.split;
    trace_begin(trace, 4, j, "Q4/OneEdgePerDim");
    const Edge cross = h.m_cross[0];
    const Vertex u = s.project(s.side(cross.lo) == side0 ? cross.lo : cross.hi);
    trace_call(trace, 4, "cycle_through_forest");
    const HamCycle c0 = cycle_through_forest(3, h.m[0]);
    const auto [a, b] = neighbors_on(c0, u);
    const Vertex v = crossing_faulty(h, a) ? b : a;
    EdgeSet forest = h.m[1];
    forest.insert(Edge::between(u, v));
    trace_call(trace, 4, "cycle_through_forest");
    const HamCycle c1 = cycle_through_forest(3, forest);
    return merge_cycles(c0, c1, Edge::between(u, v), s, side0);
}

std::optional<HamCycle> whole_cube_search(const EdgeSet& matching, const EdgeSet& faults, ConstructionTrace* trace) {
    trace_call(trace, 4, "solve");
    return solve_cycle(4, matching, faults, "q4_base");
}

std::optional<HamCycle> route_clean_dim(const EdgeSet& matching, const EdgeSet& faults, ConstructionTrace* trace) {
    const Edge f_raw = faults[0];
    int j = -1;
    for (int d = 0; d < 4 && j < 0; ++d) {
        if (matching.count_in_dim(d) != 0) continue;
        const SplitParts p = split(4, d, matching, faults);
        if (std::max(p.matching_half[0].size(), p.matching_half[1].size()) <= 3) j = d;
    }
    if (j < 0) {
        // Every dimension missed by M leaves all four edges in one half.
        trace_begin(trace, 4, -1, "Q4/CleanDim/Unsplit");
        return whole_cube_search(matching, faults, trace);
    }
    const SplitParts parts = split(4, j, matching, faults);
    int side0 = parts.matching_half[1].size() > parts.matching_half[0].size() ? 1 : 0;
    if (parts.matching_half[0].size() == parts.matching_half[1].size() && half_of(parts.split, f_raw) == 1 - side0)
        side0 = 1 - side0;
    const Halves h = orient(parts, side0);
    const SubcubeSplit& s = h.split;
    const int f_side = half_of(s, f_raw);  // physical side, -1 crossing
    const bool f_in_half0 = f_side == side0;
    const bool f_in_half1 = f_side == 1 - side0;

    if (h.m[0].size() == 3) {
        const Edge xy = h.m[1][0];
        if (f_in_half0) {
            const Edge f = h.f[0][0];
            trace_call(trace, 4, "cycle_through_forest");
            const HamCycle c0 = cycle_through_forest(3, h.m[0]);
            const bool f_on_c0 = c0.edges().contains(f);
            if (!f_on_c0 || f != xy) {
                trace_begin(trace, 4, j, "Q4/CleanDim/Case1.1/Path");
                Edge uv = f;
                if (!f_on_c0) {
                    bool have = false;
                    for (const auto& cand : edges_in_order(c0)) {
                        if (h.m[0].contains(cand) || cand == xy) continue;
                        uv = cand;
                        have = true;
                        break;
                    }
                    if (!have) throw InternalInvariantError("Q4/CleanDim: no admissible surgery edge on C0");
                }
                trace_call(trace, 4, "path_through_edge");
                const HamPath p1 = path_through_edge(3, uv.lo, uv.hi, xy);
                return merge_cycle_path(c0, p1, uv, s, side0);
            }
            trace_begin(trace, 4, j, "Q4/CleanDim/Case1.1/PinnedPair");
            for (const auto& cand : edges_in_order(c0)) {
                if (h.m[0].contains(cand) || cand == f || edge_distance(cand, f) != 1) continue;
                trace_call(trace, 4, "spanning_two_paths(pinned)");
                const SpanningPathPair pair = spanning_two_paths(3, xy.lo, xy.hi, cand.lo, cand.hi, true);
                return merge_cycle_two_paths(c0, pair, EdgeSet{f, cand}, {}, s, side0);
            }
            throw InternalInvariantError("Q4/CleanDim: no C0 edge at distance 1 from f");
        }
        trace_begin(trace, 4, j, "Q4/CleanDim/Case1.2");
        trace_call(trace, 4, "cycle_avoiding_faults_through_edge");
        const HamCycle c1 = cycle_avoiding_faults_through_edge(3, xy, h.f[1]);
        for (const auto& cand : edges_in_order(c1)) {
            if (cand == xy || h.m[0].contains(cand)) continue;
            if (crossing_faulty(h, cand.lo) || crossing_faulty(h, cand.hi)) continue;
            trace_call(trace, 4, "q3_matching_plus_edge");
            const auto c0 = q3_matching_plus_edge(h.m[0], cand);
            if (!c0) continue;
            return merge_cycles(*c0, c1, cand, s, side0);
        }
        throw InternalInvariantError("Q4/CleanDim: no edge of C1 extends M0 to a cycle");
    }

    // |M0| = |M1| = 2, f crossing or inside half 0
    if (!f_in_half0 && !f_in_half1) {
        trace_begin(trace, 4, j, "Q4/CleanDim/Case2/CrossFault");
        trace_call(trace, 4, "cycle_through_forest");
        const HamCycle c0 = cycle_through_forest(3, h.m[0]);
        for (const auto& cand : edges_in_order(c0)) {
            if (h.m[0].contains(cand) || h.m[1].contains(cand)) continue;
            if (crossing_faulty(h, cand.lo) || crossing_faulty(h, cand.hi)) continue;
            EdgeSet forest = h.m[1];
            forest.insert(cand);
            trace_call(trace, 4, "cycle_through_forest");
            const HamCycle c1 = cycle_through_forest(3, forest);
            return merge_cycles(c0, c1, cand, s, side0);
        }
        throw InternalInvariantError("Q4/CleanDim: no admissible surgery edge on C0");
    }
    const Edge f = h.f[0][0];
    const bool exceptional_half = is_q3_exception(h.m[0], h.f[0]);
    if (!exceptional_half) {
        trace_begin(trace, 4, j, "Q4/CleanDim/Case2/HalfFault");
        trace_call(trace, 4, "q3_cycle_two_edges_one_fault");
        const HamCycle c0 = *q3_cycle_two_edges_one_fault(h.m[0], h.f[0]);
        for (const auto& cand : edges_in_order(c0)) {
            if (h.m[0].contains(cand) || h.m[1].contains(cand)) continue;
            EdgeSet forest = h.m[1];
            forest.insert(cand);
            trace_call(trace, 4, "cycle_through_forest");
            const HamCycle c1 = cycle_through_forest(3, forest);
            return merge_cycles(c0, c1, cand, s, side0);
        }
        throw InternalInvariantError("Q4/CleanDim: no admissible surgery edge on C0");
    }
    if (!h.m[1].contains(f)) {
        trace_begin(trace, 4, j, "Q4/CleanDim/Case2/ExceptionalHalf");
        EdgeSet forest0 = h.m[0];
        forest0.insert(f);
        trace_call(trace, 4, "cycle_through_forest");
        const HamCycle c0 = cycle_through_forest(3, forest0);
        EdgeSet forest1 = h.m[1];
        forest1.insert(f);
        trace_call(trace, 4, "cycle_through_forest");
        const HamCycle c1 = cycle_through_forest(3, forest1);
        return merge_cycles(c0, c1, f, s, side0);
    }
    trace_begin(trace, 4, j, "Q4/CleanDim/Case2/ExceptionalHalfMatched");
    return whole_cube_search(matching, faults, trace);
}

}  // namespace

BaseOutcome q4_base(const EdgeSet& matching, const EdgeSet& faults, Q4Mode mode, ConstructionTrace* trace) {
    check_edges_in(4, matching, "matching");
    check_edges_in(4, faults, "fault");
    require(is_matching(matching), "q4_base: M must be a matching");
    require(matching.disjoint(faults), "q4_base: M and F must be disjoint");
    require(!matching.empty() && matching.size() <= 6, "q4_base: 1 <= |M| <= 6");
    require(static_cast<int>(faults.size()) <= 3 - ceil_half(matching.size()), "q4_base: |F| <= 3 - ceil(|M|/2)");

    const std::size_t m = matching.size();
    const std::size_t f = faults.size();
    std::optional<HamCycle> cycle;
    if (mode == Q4Mode::pure_solver) {
        trace_begin(trace, 4, -1, "Q4/Solver");
        cycle = whole_cube_search(matching, faults, trace);
    } else if (f == 0) {
        trace_begin(trace, 4, -1, "Q4/NoFaults");
        cycle = base_cycle_small(4, matching, trace);
    } else if (m <= 3 && static_cast<int>(f) <= 2 - static_cast<int>(m / 2)) {
        trace_begin(trace, 4, -1, "Q4/ForestRoute");
        trace_call(trace, 4, "cycle_through_forest_avoiding_faults");
        cycle = cycle_through_forest_avoiding_faults(4, matching, faults);
    } else if (m == 2 && f == 2) {
        cycle = route_two_faults(matching, faults, trace);
    } else if (m == 4 && f == 1) {
        bool missing_dim = false;
        for (int d = 0; d < 4; ++d) missing_dim = missing_dim || matching.count_in_dim(d) == 0;
        if (missing_dim)
            cycle = route_clean_dim(matching, faults, trace);
        else
            cycle = route_one_edge_per_dim(matching, faults, trace);
    } else {
        throw InternalInvariantError("q4_base: no route for this size combination");
    }

    if (!cycle) {
        if (!is_case_a(matching, faults))
            throw InternalInvariantError("q4_base: no cycle found outside the exceptional class");
        return BaseOutcome{};
    }
    self_check(*cycle, matching, faults, "q4_base");
    return BaseOutcome{std::move(cycle)};
}

// --- Q_5 dimension choice ------------------------------------------------------------

int q5_choose_dimension(const EdgeSet& matching, const EdgeSet& faults) {
    check_edges_in(5, matching, "matching");
    check_edges_in(5, faults, "fault");
    require(is_matching(matching), "q5_choose_dimension: M must be a matching");
    require(!matching.empty() && matching.size() <= 8, "q5_choose_dimension: 1 <= |M| <= 8");
    require(static_cast<int>(faults.size()) <= 4 - ceil_half(matching.size()),
            "q5_choose_dimension: |F| <= 4 - ceil(|M|/2)");

    auto light = [&](int j) { return matching.count_in_dim(j) + faults.count_in_dim(j) <= 1; };
    auto clean = [&](int j) {
        const SplitParts p = split(5, j, matching, faults);
        return !is_case_a(p.matching_half[0], p.faults_half[0]) && !is_case_a(p.matching_half[1], p.faults_half[1]);
    };
    auto first_light = [&]() {
        for (int j = 0; j < 5; ++j)
            if (light(j)) return j;
        throw InternalInvariantError("q5_choose_dimension: no dimension with |E_j ∩ (M ∪ F)| <= 1");
    };

    const int i = first_light();
    if (clean(i)) return i;

    if (matching.size() == 4) {
        for (int j0 = 0; j0 < 5; ++j0) {
            if (faults.count_in_dim(j0) > 1 || matching.count_in_dim(j0) != 0) continue;
            const SplitParts p = split(5, j0, matching, faults);
            if (p.matching_half[0].size() != 2 || p.matching_half[1].size() != 2) continue;
            if (clean(j0)) return j0;
        }
    } else {
        // One half of the split on i is the exceptional class, which lies in a
        // single dimension class k of that half; among the other light
        // dimensions one of the first two works.
        const SplitParts p = split(5, i, matching, faults);
        const int bad = is_case_a(p.matching_half[0], p.faults_half[0]) ? 0 : 1;
        const int k_half = p.matching_half[bad][0].dim;
        const int k = k_half < i ? k_half : k_half + 1;
        for (int j = 0; j < 5; ++j) {
            if (j == i || j == k || !light(j)) continue;
            if (clean(j)) return j;
        }
    }
    for (int j = 0; j < 5; ++j)
        if (light(j) && clean(j)) return j;
    throw InternalInvariantError("q5_choose_dimension: no admissible dimension");
}

const std::vector<std::string>& base_case_labels() {
    static const std::vector<std::string> labels = {
        "Base/Perfect",
        "Base/Forest",
        "Base/Split/Cross",
        "Base/Split/NoCross",
        "Q4/NoFaults",
        "Q4/ForestRoute",
        "Q4/TwoFaults/Case1",
        "Q4/TwoFaults/Case1/BothFaultsInHalf",
        "Q4/TwoFaults/Case2",
        "Q4/OneEdgePerDim",
        "Q4/CleanDim/Case1.1/Path",
        "Q4/CleanDim/Case1.1/PinnedPair",
        "Q4/CleanDim/Case1.2",
        "Q4/CleanDim/Case2/CrossFault",
        "Q4/CleanDim/Case2/HalfFault",
        "Q4/CleanDim/Case2/ExceptionalHalf",
        "Q4/CleanDim/Case2/ExceptionalHalfMatched",
    };
    return labels;
}

}  // namespace hcube
