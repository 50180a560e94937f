#include "hcube/constructor.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "hcube/basecases.hpp"
#include "hcube/errors.hpp"
#include "hcube/primitives.hpp"

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

EdgeSet path_edges(const std::vector<Vertex>& seq) {
    EdgeSet out;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) out.insert(Edge::between(seq[i], seq[i + 1]));
    return out;
}

struct Joined {
    HamCycle cycle;
    EdgeSet removed;  // Q_n coordinates
    EdgeSet added;
};

// Core of every surgery: lift both halves, delete `removed0` / `removed1`,
// add `added0` inside half side0 and the crossing edges at `cross_at`.
Joined join(const SubcubeSplit& s, int side0, const EdgeSet& half0, const EdgeSet& half1, const EdgeSet& removed0,
            const EdgeSet& removed1, const EdgeSet& added0, const std::vector<Vertex>& cross_at, const char* who) {
    for (const auto& e : removed0)
        require(half0.contains(e), std::string(who) + ": edge to remove is not on the half-0 piece");
    for (const auto& e : removed1)
        require(half1.contains(e), std::string(who) + ": edge to remove is not on the half-1 piece");
    Joined out;
    out.removed = s.lift(removed0, side0).unite(s.lift(removed1, 1 - side0));
    out.added = s.lift(added0, side0);
    for (Vertex w : cross_at) out.added.insert(Edge::between(s.lift(w, 0), s.lift(w, 1)));
    const EdgeSet edges = s.lift(half0.minus(removed0).unite(added0), side0)
                              .unite(s.lift(half1.minus(removed1), 1 - side0))
                              .unite(out.added);
    try {
        out.cycle = assemble_cycle(s.parent_dimension(), edges);
    } catch (const InternalInvariantError&) {
        throw PreconditionError(std::string(who) + ": the pieces do not close into one Hamiltonian cycle");
    }
    return out;
}

}  // namespace

// --- surgery -------------------------------------------------------------------------

HamCycle merge_cycles(const HamCycle& c0, const HamCycle& c1, const Edge& uv, const SubcubeSplit& split,
                      int side0) {
    return join(split, side0, c0.edges(), c1.edges(), EdgeSet{uv}, EdgeSet{uv}, {}, {uv.lo, uv.hi}, "merge_cycles")
        .cycle;
}

HamCycle merge_cycle_path(const HamCycle& c0, const HamPath& p1, const Edge& uv, const SubcubeSplit& split,
                          int side0) {
    require((p1.front() == uv.lo && p1.back() == uv.hi) || (p1.front() == uv.hi && p1.back() == uv.lo),
            "merge_cycle_path: path endpoints must be the ends of uv");
    return join(split, side0, c0.edges(), p1.edges(), EdgeSet{uv}, {}, {}, {uv.lo, uv.hi}, "merge_cycle_path").cycle;
}

HamCycle merge_cycle_path(const HamCycle& c0, const HamPath& p1, const EdgeSet& removed, const EdgeSet& added,
                          const SubcubeSplit& split, int side0) {
    return join(split, side0, c0.edges(), p1.edges(), removed, {}, added, {p1.front(), p1.back()}, "merge_cycle_path")
        .cycle;
}

HamCycle merge_cycle_two_paths(const HamCycle& c0, const SpanningPathPair& pair, const EdgeSet& removed,
                               const EdgeSet& added, const SubcubeSplit& split, int side0) {
    const EdgeSet half1 = path_edges(pair.first).unite(path_edges(pair.second));
    return join(split, side0, c0.edges(), half1, removed, {}, added,
                {pair.first.front(), pair.first.back(), pair.second.front(), pair.second.back()},
                "merge_cycle_two_paths")
        .cycle;
}

// --- shared machinery of both constructions -----------------------------------------

namespace {

// Signals that a sub-instance is the exceptional Q_4 class although the
// chosen branch needs a cycle there; the caller tries another choice.
struct Blocked {};

HamCycle need(std::optional<HamCycle> c) {
    if (!c) throw Blocked{};
    return std::move(*c);
}

struct Parts {
    int n = 0;
    SubcubeSplit s{2, 0};
    int side0 = 0;
    EdgeSet m0, m1, f0, f1;  // Q_{n-1} coordinates, index 0 = logical half 0
    EdgeSet m_cross, f_cross;

    // Endpoint in half 0 of a crossing edge, in Q_{n-1} coordinates.
    Vertex inner(const Edge& cross) const { return s.project(s.side(cross.lo) == side0 ? cross.lo : cross.hi); }
};

Parts make_parts(int n, int j, const EdgeSet& m, const EdgeSet& f, bool faults_break_ties) {
    const SplitParts raw = split(n, j, m, f);
    int side0 = 0;
    const auto& mh = raw.matching_half;
    const auto& fh = raw.faults_half;
    if (mh[1].size() > mh[0].size() ||
        (faults_break_ties && mh[1].size() == mh[0].size() && fh[1].size() > fh[0].size()))
        side0 = 1;
    Parts p;
    p.n = n;
    p.s = raw.split;
    p.side0 = side0;
    p.m0 = mh[side0];
    p.m1 = mh[1 - side0];
    p.f0 = fh[side0];
    p.f1 = fh[1 - side0];
    p.m_cross = raw.matching_cross;
    p.f_cross = raw.faults_cross;
    return p;
}

HamCycle joined(ConstructionTrace* trace, const Parts& p, const EdgeSet& half0, const EdgeSet& half1,
                const EdgeSet& removed0, const EdgeSet& removed1, const EdgeSet& added0,
                const std::vector<Vertex>& cross_at) {
    Joined j = join(p.s, p.side0, half0, half1, removed0, removed1, added0, cross_at, "surgery");
    trace_surgery(trace, p.n, j.removed, j.added);
    return std::move(j.cycle);
}

HamCycle join_cycles(ConstructionTrace* trace, const Parts& p, const HamCycle& c0, const HamCycle& c1,
                     const Edge& uv) {
    return joined(trace, p, c0.edges(), c1.edges(), EdgeSet{uv}, EdgeSet{uv}, {}, {uv.lo, uv.hi});
}

HamCycle join_path(ConstructionTrace* trace, const Parts& p, const HamCycle& c0, const HamPath& p1,
                   const EdgeSet& removed0, const EdgeSet& added0) {
    return joined(trace, p, c0.edges(), p1.edges(), removed0, {}, added0, {p1.front(), p1.back()});
}

HamCycle join_pair(ConstructionTrace* trace, const Parts& p, const HamCycle& c0, const SpanningPathPair& pair,
                   const EdgeSet& removed0, const EdgeSet& added0) {
    const EdgeSet half1 = path_edges(pair.first).unite(path_edges(pair.second));
    return joined(trace, p, c0.edges(), half1, removed0, {}, added0,
                  {pair.first.front(), pair.first.back(), pair.second.front(), pair.second.back()});
}

// The cycle read from x: c[0] = x and c[k] = y for the edge xy not on it.
struct Arc {
    std::vector<Vertex> c;
    std::size_t k = 0;
};

Arc arc_from(const HamCycle& cyc, Vertex x, Vertex y) {
    const std::size_t total = cyc.seq.size();
    const std::size_t px = position_of(cyc, x);
    Arc a;
    a.c.resize(total);
    for (std::size_t i = 0; i < total; ++i) a.c[i] = cyc.seq[(px + i) % total];
    a.k = (position_of(cyc, y) + total - px) % total;
    return a;
}

// The two choices of neighbours s of x and t of y that lie on different
// x-y arcs of the cycle.
std::array<std::pair<Vertex, Vertex>, 2> separated_neighbors(const Arc& a) {
    const std::size_t total = a.c.size();
    return {{{a.c[1], a.c[a.k + 1]}, {a.c[total - 1], a.c[a.k - 1]}}};
}

bool is_edge_pair(Vertex a, Vertex b) { return hamming_distance(a, b) == 1; }

// Counting bound that guarantees a surgery edge exists.
void guard(long long available, const char* what) {
    if (available < 1) throw InternalInvariantError(std::string("counting guard failed: ") + what);
}

long long half_cycle_edges(int n) { return 1LL << (n - 1); }

// Both pairs handed to spanning_two_paths must have odd distance.
void assert_odd_pairs(Vertex a, Vertex b, Vertex c, Vertex d) {
    if (hamming_distance(a, b) % 2 == 0 || hamming_distance(c, d) % 2 == 0)
        throw InternalInvariantError("spanning path endpoints with even distance");
}

void validated(const HamCycle& c, const EdgeSet& m, const EdgeSet& f, const char* who) {
    const CycleVerdict v = validate_cycle(c, m, f);
    if (!v.pass())
        throw InternalInvariantError(std::string(who) + ": produced cycle fails validation" +
                                     (v.problems.empty() ? "" : ": " + v.problems.front()));
}

// Endpoint pairing of a spanning linear forest with exactly two paths.
std::optional<std::array<Vertex, 4>> two_path_ends(int n, const EdgeSet& edges) {
    const Vertex total = num_vertices(n);
    std::vector<std::array<Vertex, 2>> adj(total);
    std::vector<int> deg(total, 0);
    for (const auto& e : edges) {
        if (deg[e.lo] == 2 || deg[e.hi] == 2) return std::nullopt;
        adj[e.lo][deg[e.lo]++] = e.hi;
        adj[e.hi][deg[e.hi]++] = e.lo;
    }
    std::vector<Vertex> ends;
    for (Vertex v = 0; v < total; ++v) {
        if (deg[v] == 0) return std::nullopt;
        if (deg[v] == 1) ends.push_back(v);
    }
    if (ends.size() != 4) return std::nullopt;
    std::array<Vertex, 4> out{};
    std::vector<char> seen(total, 0);
    std::size_t covered = 0;
    int slot = 0;
    for (Vertex start : ends) {
        if (seen[start]) continue;
        Vertex prev = start;
        Vertex cur = start;
        seen[cur] = 1;
        ++covered;
        while (true) {
            Vertex next = total;
            for (int i = 0; i < deg[cur]; ++i)
                if (adj[cur][i] != prev && !seen[adj[cur][i]]) next = adj[cur][i];
            if (next == total) break;
            prev = cur;
            cur = next;
            seen[cur] = 1;
            ++covered;
        }
        if (deg[cur] != 1 || cur == start) return std::nullopt;
        out[slot++] = start;
        out[slot++] = cur;
    }
    if (slot != 4 || covered != total) return std::nullopt;
    return out;
}

// --- matching extension without faults -----------------------------------------------

HamCycle t1(int n, const EdgeSet& m, ConstructionTrace* trace);

HamCycle t1_claim1(const Parts& p, const HamCycle& c0, ConstructionTrace* trace) {
    guard(half_cycle_edges(p.n) - (2 * p.n - 1), "2^{n-1} - (2n-1) >= 1");
    Edge uv{};
    if (!p.m_cross.empty()) {
        const Vertex u = p.inner(p.m_cross[0]);
        uv = Edge::between(u, neighbors_on(c0, u).second);
    } else {
        bool have = false;
        for (const auto& e : edges_in_order(c0)) {
            if (p.m0.contains(e) || p.m1.contains(e)) continue;
            uv = e;
            have = true;
            break;
        }
        if (!have) throw InternalInvariantError("extend_matching: every edge of C0 is matched");
    }
    EdgeSet forest = p.m1;
    forest.insert(uv);
    trace_call(trace, p.n, "cycle_through_forest");
    const HamCycle c1 = cycle_through_forest(p.n - 1, forest);
    return join_cycles(trace, p, c0, c1, uv);
}

HamCycle t1_case1(const Parts& p, ConstructionTrace* trace) {
    const int h = p.n - 1;
    const Edge xy = p.m0[0];
    EdgeSet rest = p.m0;
    rest.erase(xy);
    const HamCycle c0 = t1(h, rest, trace);
    if (c0.edges().contains(xy)) {
        trace_relabel(trace, p.n, "Extend/Case1/OnCycle");
        return t1_claim1(p, c0, trace);
    }
    const Arc a = arc_from(c0, xy.lo, xy.hi);
    const auto ways = separated_neighbors(a);
    const Vertex x = xy.lo;
    const Vertex y = xy.hi;
    if (p.m_cross.empty()) {
        trace_relabel(trace, p.n, "Extend/Case1/NoCross");
        for (const auto& [s, t] : ways) {
            if (is_edge_pair(s, t) && p.m1.contains(Edge::between(s, t))) continue;
            HamPath p1;
            if (p.m1.empty()) {
                trace_call(trace, p.n, "havel_path");
                p1 = havel_path(h, s, t);
            } else {
                trace_call(trace, p.n, "path_through_edge");
                p1 = path_through_edge(h, s, t, p.m1[0]);
            }
            return join_path(trace, p, c0, p1, EdgeSet{Edge::between(x, s), Edge::between(y, t)}, EdgeSet{xy});
        }
        throw InternalInvariantError("extend_matching: both neighbour choices hit M1");
    }
    trace_relabel(trace, p.n, "Extend/Case1/Cross");
    const Vertex u = p.inner(p.m_cross[0]);
    for (const auto& [s, t] : ways) {
        if (u == s || u == t) continue;
        const auto [pred, succ] = neighbors_on(c0, u);
        const Vertex v = (succ != s && succ != t) ? succ : pred;
        if (v == s || v == t) throw InternalInvariantError("extend_matching: both cycle neighbours of u are in {s, t}");
        assert_odd_pairs(u, v, s, t);
        trace_call(trace, p.n, "spanning_two_paths");
        const SpanningPathPair pair = spanning_two_paths(h, u, v, s, t, false);
        return join_pair(trace, p, c0, pair,
                         EdgeSet{Edge::between(u, v), Edge::between(x, s), Edge::between(y, t)}, EdgeSet{xy});
    }
    throw InternalInvariantError("extend_matching: u lies in both neighbour choices");
}

HamCycle t1_case2(const Parts& p, ConstructionTrace* trace) {
    const int h = p.n - 1;
    const Edge xy = p.m0[0];
    const Edge uv = p.m0[1];
    EdgeSet rest = p.m0;
    rest.erase(xy);
    rest.erase(uv);
    const HamCycle c0 = t1(h, rest, trace);
    const EdgeSet on = c0.edges();
    if (on.contains(xy) && on.contains(uv)) {
        trace_relabel(trace, p.n, "Extend/Case2/BothOnCycle");
        return t1_claim1(p, c0, trace);
    }
    if (on.contains(xy) || on.contains(uv)) {
        trace_relabel(trace, p.n, "Extend/Case2/OneOnCycle");
        const Edge off = on.contains(xy) ? uv : xy;
        const Arc a = arc_from(c0, off.lo, off.hi);
        const auto [s, t] = separated_neighbors(a)[0];
        trace_call(trace, p.n, "havel_path");
        const HamPath p1 = havel_path(h, s, t);
        return join_path(trace, p, c0, p1, EdgeSet{Edge::between(off.lo, s), Edge::between(off.hi, t)}, EdgeSet{off});
    }

    // Neither withheld edge is on C0: drop one cycle edge at each of x, y,
    // u, v so that what remains plus xy, uv is two spanning paths.
    const Arc a = arc_from(c0, uv.lo, uv.hi);
    bool x_on_first = false;
    bool y_on_first = false;
    for (std::size_t i = 1; i < a.k; ++i) {
        x_on_first = x_on_first || a.c[i] == xy.lo;
        y_on_first = y_on_first || a.c[i] == xy.hi;
    }
    const bool together = x_on_first == y_on_first;
    trace_relabel(trace, p.n, together ? "Extend/Case2/Together" : "Extend/Case2/Apart");

    const std::array<Vertex, 4> ends = {xy.lo, xy.hi, uv.lo, uv.hi};
    std::array<std::pair<Vertex, Vertex>, 4> nb;
    for (int i = 0; i < 4; ++i) nb[i] = neighbors_on(c0, ends[i]);
    for (int mask = 0; mask < 16; ++mask) {
        EdgeSet removed;
        for (int i = 0; i < 4; ++i) {
            const Vertex other = (mask >> i) & 1 ? nb[i].second : nb[i].first;
            removed.insert(Edge::between(ends[i], other));
        }
        if (removed.size() != 4) continue;
        const EdgeSet half0 = on.minus(removed).unite(EdgeSet{xy, uv});
        const auto pe = two_path_ends(h, half0);
        if (!pe) continue;
        const auto [a0, b0, c0e, d0] = *pe;
        // pair the ends of different paths, with odd distances
        std::array<std::array<Vertex, 4>, 2> options = {{{a0, c0e, b0, d0}, {a0, d0, b0, c0e}}};
        for (const auto& o : options) {
            if (hamming_distance(o[0], o[1]) % 2 == 0 || hamming_distance(o[2], o[3]) % 2 == 0) continue;
            assert_odd_pairs(o[0], o[1], o[2], o[3]);
            trace_call(trace, p.n, "spanning_two_paths");
            const SpanningPathPair pair = spanning_two_paths(h, o[0], o[1], o[2], o[3], false);
            return join_pair(trace, p, c0, pair, removed, EdgeSet{xy, uv});
        }
    }
    throw InternalInvariantError("extend_matching: no choice of neighbours leaves two spanning paths");
}

HamCycle t1(int n, const EdgeSet& m, ConstructionTrace* trace) {
    if (n <= 4) return base_cycle_small(n, m, trace);
    int j = 0;
    while (j < n && m.count_in_dim(j) > 1) ++j;
    if (j == n) throw InternalInvariantError("extend_matching: no dimension with |M ∩ E_j| <= 1");
    const Parts p = make_parts(n, j, m, {}, false);
    const int h = n - 1;
    HamCycle out;
    if (static_cast<int>(p.m0.size()) <= 2 * h - 1) {
        trace_begin(trace, n, j, p.m_cross.empty() ? "Extend/TwoCycles/NoCross" : "Extend/TwoCycles/Cross");
        const HamCycle c0 = t1(h, p.m0, trace);
        out = t1_claim1(p, c0, trace);
    } else if (static_cast<int>(p.m0.size()) == 2 * h) {
        trace_begin(trace, n, j, "Extend/Case1");
        out = t1_case1(p, trace);
    } else {
        trace_begin(trace, n, j, "Extend/Case2");
        out = t1_case2(p, trace);
    }
    validated(out, m, {}, "extend_matching");
    return out;
}

// --- matching extension with faults --------------------------------------------------

std::optional<HamCycle> t2(int n, const EdgeSet& m, const EdgeSet& f, ConstructionTrace* trace);

HamCycle half_cycle_through_edge(ConstructionTrace* trace, int n, int h, const Edge& e, const EdgeSet& faults) {
    trace_call(trace, n, "cycle_avoiding_faults_through_edge");
    return cycle_avoiding_faults_through_edge(h, e, faults);
}

HamCycle half_cycle_through_forest(ConstructionTrace* trace, int n, int h, const EdgeSet& forest, const EdgeSet& faults) {
    trace_call(trace, n, "cycle_through_forest_avoiding_faults");
    return cycle_through_forest_avoiding_faults(h, forest, faults);
}

HamCycle sub(ConstructionTrace* trace, int h, const EdgeSet& m, const EdgeSet& f) { return need(t2(h, m, f, trace)); }

// Runs `attempt` for each candidate; an exceptional sub-instance moves on
// to the next one and discards its trace steps.
template <class T, class Fn>
HamCycle first_unblocked(ConstructionTrace* trace, const std::vector<T>& candidates, Fn&& attempt) {
    for (const auto& c : candidates) {
        const std::size_t mark = trace ? trace->mark() : 0;
        try {
            return attempt(c);
        } catch (const Blocked&) {
            if (trace) trace->rollback(mark);
        }
    }
    throw Blocked{};
}

Edge first_free_edge(const HamCycle& c, const EdgeSet& avoid) {
    for (const auto& e : edges_in_order(c))
        if (!avoid.contains(e)) return e;
    throw InternalInvariantError("extend_matching_faulty: no free edge on C0");
}

HamCycle case1(const Parts& p, const EdgeSet& m, ConstructionTrace* trace) {
    const int n = p.n;
    const int h = n - 1;
    if (p.m0.size() + 2 <= m.size()) {
        trace_relabel(trace, n, "Faulty/Case1.1");
        guard(half_cycle_edges(n) - (2 * n - 4), "2^{n-1} - (2n-4) >= 1");
        const HamCycle c0 = sub(trace, h, p.m0, p.f0);
        const Edge uv = first_free_edge(c0, p.m0.unite(p.m1));
        EdgeSet forest = p.m1;
        forest.insert(uv);
        EdgeSet f1 = p.f1;
        f1.erase(uv);
        const HamCycle c1 = half_cycle_through_forest(trace, n, h, forest, f1);
        return join_cycles(trace, p, c0, c1, uv);
    }
    if (p.m0.size() + 1 == m.size()) {
        const Edge wt = p.m1[0];
        if (p.f1.empty()) {
            if (p.m0.size() == 1) {
                trace_relabel(trace, n, "Faulty/Case1.2.1/SingleEdge");
                const Edge xy = p.m0[0];
                std::vector<Edge> choices;
                for (const auto& f : p.f0)
                    if (f != wt) choices.push_back(f);
                if (choices.empty()) throw InternalInvariantError("extend_matching_faulty: every fault equals wt");
                const Edge f = choices.front();
                EdgeSet rest = p.f0;
                rest.erase(f);
                const HamCycle c0 = half_cycle_through_edge(trace, n, h, xy, rest);
                const Edge uv = c0.edges().contains(f) ? f : first_free_edge(c0, EdgeSet{xy, wt});
                trace_call(trace, n, "path_through_edge");
                const HamPath p1 = path_through_edge(h, uv.lo, uv.hi, wt);
                return join_path(trace, p, c0, p1, EdgeSet{uv}, {});
            }
            return first_unblocked(trace, p.m0.edges(), [&](const Edge& xy) {
                EdgeSet rest = p.m0;
                rest.erase(xy);
                const HamCycle c0 = sub(trace, h, rest, p.f0);
                if (c0.edges().contains(xy)) {
                    trace_relabel(trace, n, "Faulty/Case1.2.1/OnCycle");
                    const Edge uv = first_free_edge(c0, p.m0.unite(EdgeSet{wt}));
                    trace_call(trace, n, "path_through_edge");
                    const HamPath p1 = path_through_edge(h, uv.lo, uv.hi, wt);
                    return join_path(trace, p, c0, p1, EdgeSet{uv}, {});
                }
                trace_relabel(trace, n, "Faulty/Case1.2.1/OffCycle");
                const Arc a = arc_from(c0, xy.lo, xy.hi);
                for (const auto& [u, v] : separated_neighbors(a)) {
                    if (is_edge_pair(u, v) && Edge::between(u, v) == wt) continue;
                    trace_call(trace, n, "path_through_edge");
                    const HamPath p1 = path_through_edge(h, u, v, wt);
                    return join_path(trace, p, c0, p1, EdgeSet{Edge::between(xy.lo, u), Edge::between(xy.hi, v)},
                                     EdgeSet{xy});
                }
                throw InternalInvariantError("extend_matching_faulty: both neighbour choices equal wt");
            });
        }
        trace_relabel(trace, n, "Faulty/Case1.2.2");
        guard(half_cycle_edges(n) - (2 * n - 5 + 4), "2^{n-1} - (2n-5+4) >= 1");
        const HamCycle c0 = sub(trace, h, p.m0, p.f0);
        for (const auto& uv : edges_in_order(c0)) {
            if (p.m0.contains(uv) || uv.touches(wt)) continue;
            EdgeSet f1 = p.f1;
            f1.erase(uv);
            const HamCycle c1 = sub(trace, h, EdgeSet{wt, uv}, f1);
            return join_cycles(trace, p, c0, c1, uv);
        }
        throw InternalInvariantError("extend_matching_faulty: no C0 edge disjoint from wt");
    }

    // M0 = M
    auto close_with_edge_cycle = [&](const HamCycle& c0, const Edge& uv) {
        EdgeSet f1 = p.f1;
        f1.erase(uv);
        const HamCycle c1 = half_cycle_through_edge(trace, n, h, uv, f1);
        return join_cycles(trace, p, c0, c1, uv);
    };
    if (!p.f0.empty()) {
        trace_relabel(trace, n, "Faulty/Case1.3/FaultInHalf");
        return first_unblocked(trace, p.f0.edges(), [&](const Edge& f) {
            EdgeSet rest = p.f0;
            rest.erase(f);
            const HamCycle c0 = sub(trace, h, p.m0, rest);
            const Edge uv = c0.edges().contains(f) ? f : first_free_edge(c0, p.m0);
            return close_with_edge_cycle(c0, uv);
        });
    }
    if (m.size() >= 3) {
        trace_relabel(trace, n, "Faulty/Case1.3/NoFaultInHalf");
        const HamCycle c0 = sub(trace, h, p.m0, {});
        return close_with_edge_cycle(c0, first_free_edge(c0, p.m0));
    }
    trace_relabel(trace, n, "Faulty/Case1.3/TwoEdges");
    for (const auto& uv : p.f1) {
        if (p.m0.contains(uv)) continue;
        EdgeSet f1 = p.f1;
        f1.erase(uv);
        const HamCycle c1 = half_cycle_through_edge(trace, n, h, uv, f1);
        EdgeSet forest = p.m0;
        forest.insert(uv);
        trace_call(trace, n, "cycle_through_forest");
        const HamCycle c0 = cycle_through_forest(h, forest);
        return join_cycles(trace, p, c0, c1, uv);
    }
    throw InternalInvariantError("extend_matching_faulty: every half-1 fault projects onto M");
}

HamCycle case2(const Parts& p, ConstructionTrace* trace) {
    const int n = p.n;
    const int h = n - 1;
    trace_relabel(trace, n, "Faulty/Case2");
    guard(half_cycle_edges(n) - (2 * n - 4 + 2), "2^{n-1} - (2n-4+2) >= 1");
    const Vertex x = p.inner(p.f_cross[0]);
    const HamCycle c0 = sub(trace, h, p.m0, p.f0);
    for (const auto& uv : edges_in_order(c0)) {
        if (p.m0.contains(uv) || p.m1.contains(uv) || uv.has(x)) continue;
        EdgeSet forest = p.m1;
        forest.insert(uv);
        EdgeSet f1 = p.f1;
        f1.erase(uv);
        const HamCycle c1 = half_cycle_through_forest(trace, n, h, forest, f1);
        return join_cycles(trace, p, c0, c1, uv);
    }
    throw InternalInvariantError("extend_matching_faulty: no admissible C0 edge");
}

HamCycle case3(const Parts& p, ConstructionTrace* trace) {
    const int n = p.n;
    const int h = n - 1;
    const Vertex u = p.inner(p.m_cross[0]);
    if (p.m1.empty()) {
        if (p.f1.empty()) {
            return first_unblocked(trace, p.f0.edges(), [&](const Edge& f) {
                EdgeSet rest = p.f0;
                rest.erase(f);
                const HamCycle c0 = sub(trace, h, p.m0, rest);
                const auto [pred, succ] = neighbors_on(c0, u);
                if (!c0.edges().contains(f) || f.has(u)) {
                    trace_relabel(trace, n, "Faulty/Case3.1.1/Path");
                    const Edge uv = f.has(u) && c0.edges().contains(f) ? f : Edge::between(u, succ);
                    trace_call(trace, n, "havel_path");
                    const HamPath p1 = havel_path(h, uv.lo, uv.hi);
                    return join_path(trace, p, c0, p1, EdgeSet{uv}, {});
                }
                trace_relabel(trace, n, "Faulty/Case3.1.1/TwoPaths");
                const Vertex v = f.has(succ) ? pred : succ;
                assert_odd_pairs(u, v, f.lo, f.hi);
                trace_call(trace, n, "spanning_two_paths");
                const SpanningPathPair pair = spanning_two_paths(h, u, v, f.lo, f.hi, false);
                return join_pair(trace, p, c0, pair, EdgeSet{Edge::between(u, v), f}, {});
            });
        }
        trace_relabel(trace, n, "Faulty/Case3.1.2");
        const HamCycle c0 = sub(trace, h, p.m0, p.f0);
        const Edge uv = Edge::between(u, neighbors_on(c0, u).second);
        EdgeSet f1 = p.f1;
        f1.erase(uv);
        const HamCycle c1 = half_cycle_through_edge(trace, n, h, uv, f1);
        return join_cycles(trace, p, c0, c1, uv);
    }
    if (!p.f0.empty()) {
        trace_relabel(trace, n, "Faulty/Case3.2/FaultInHalf");
        const HamCycle c0 = sub(trace, h, p.m0, p.f0);
        const Edge uv = Edge::between(u, neighbors_on(c0, u).second);
        EdgeSet forest = p.m1;
        forest.insert(uv);
        EdgeSet f1 = p.f1;
        f1.erase(uv);
        const HamCycle c1 = half_cycle_through_forest(trace, n, h, forest, f1);
        return join_cycles(trace, p, c0, c1, uv);
    }
    trace_relabel(trace, n, "Faulty/Case3.2/NoFaultInHalf");
    const HamCycle c1 = sub(trace, h, p.m1, p.f1);
    const Edge uw = Edge::between(u, neighbors_on(c1, u).second);
    EdgeSet forest = p.m0;
    forest.insert(uw);
    trace_call(trace, n, "cycle_through_forest");
    const HamCycle c0 = cycle_through_forest(h, forest);
    return join_cycles(trace, p, c0, c1, uw);
}

HamCycle t2_split(int n, const EdgeSet& m, const EdgeSet& f, int j, ConstructionTrace* trace) {
    const Parts p = make_parts(n, j, m, f, true);
    if (p.m_cross.size() + p.f_cross.size() > 1)
        throw InternalInvariantError("extend_matching_faulty: split dimension carries two edges of M ∪ F");
    trace_begin(trace, n, j, "Faulty/Split");
    if (p.m_cross.empty() && p.f_cross.empty()) return case1(p, m, trace);
    if (p.m_cross.empty()) return case2(p, trace);
    if (m.size() <= 3) {
        trace_relabel(trace, n, "Faulty/Case3/Reduce");
        for (int j0 = 0; j0 < n; ++j0)
            if (m.count_in_dim(j0) == 0 && f.count_in_dim(j0) <= 1) return t2_split(n, m, f, j0, trace);
        throw InternalInvariantError("extend_matching_faulty: no dimension to reduce to");
    }
    return case3(p, trace);
}

EdgeSet pad_faults(int n, const EdgeSet& m, const EdgeSet& f) {
    const int target = n - 1 - ceil_half(m.size());
    EdgeSet out = f;
    if (static_cast<int>(out.size()) >= target) return out;
    for (const auto& e : all_edges(n)) {
        if (static_cast<int>(out.size()) == target) break;
        if (!m.contains(e)) out.insert(e);
    }
    return out;
}

std::optional<HamCycle> t2(int n, const EdgeSet& m, const EdgeSet& f, ConstructionTrace* trace) {
    if (n == 4) return q4_base(m, f, Q4Mode::case_split, trace).cycle;
    if (f.empty()) {
        trace_begin(trace, n, -1, "Faulty/NoFaults");
        return t1(n, m, trace);
    }
    if (m.size() == 1) {
        trace_begin(trace, n, -1, "Faulty/SingleEdge");
        trace_call(trace, n, "cycle_avoiding_faults_through_edge");
        return cycle_avoiding_faults_through_edge(n, m[0], f);
    }
    const EdgeSet padded = pad_faults(n, m, f);
    std::vector<int> dims;
    if (n == 5) dims.push_back(q5_choose_dimension(m, padded));
    for (int j = 0; j < n; ++j)
        if (m.count_in_dim(j) + padded.count_in_dim(j) <= 1 &&
            std::find(dims.begin(), dims.end(), j) == dims.end())
            dims.push_back(j);
    bool first = true;
    for (int j : dims) {
        const std::size_t mark = trace ? trace->mark() : 0;
        try {
            HamCycle out = t2_split(n, m, padded, j, trace);
            if (!first) trace_call(trace, n, "split retried on dimension " + std::to_string(j));
            validated(out, m, padded, "extend_matching_faulty");
            return out;
        } catch (const Blocked&) {
            if (trace) trace->rollback(mark);
        }
        first = false;
    }
    throw InternalInvariantError("extend_matching_faulty: every split dimension meets the exceptional class");
}

}  // namespace

// --- public entry points -------------------------------------------------------------

HamCycle extend_matching(int n, const EdgeSet& matching, ConstructionTrace* trace) {
    if (n < 2 || n > kMaxDimension) throw ArgumentError("extend_matching: n must be in [2, 16]");
    check_edges_in(n, matching, "matching");
    require(is_matching(matching), "extend_matching: M must be a matching");
    require(static_cast<int>(matching.size()) <= 2 * n - 1, "extend_matching: |M| <= 2n - 1");
    return t1(n, matching, trace);
}

FaultyOutcome extend_matching_faulty(int n, const EdgeSet& matching, const EdgeSet& faults,
                                     ConstructionTrace* trace) {
    if (n < 4 || n > kMaxDimension) throw ArgumentError("extend_matching_faulty: n must be in [4, 16]");
    check_edges_in(n, matching, "matching");
    check_edges_in(n, faults, "fault");
    require(is_matching(matching), "extend_matching_faulty: M must be a matching");
    require(!matching.empty() && static_cast<int>(matching.size()) <= 2 * n - 2,
            "extend_matching_faulty: 1 <= |M| <= 2n - 2");
    require(static_cast<int>(faults.size()) <= n - 1 - ceil_half(matching.size()),
            "extend_matching_faulty: |F| <= n - 1 - ceil(|M| / 2)");
    require(matching.disjoint(faults), "extend_matching_faulty: M and F must be disjoint");
    try {
        auto c = t2(n, matching, faults, trace);
        if (!c && n != 4) throw InternalInvariantError("extend_matching_faulty: exceptional verdict above Q_4");
        if (c) validated(*c, matching, faults, "extend_matching_faulty");
        return FaultyOutcome{std::move(c)};
    } catch (const Blocked&) {
        throw InternalInvariantError("extend_matching_faulty: no branch avoids the exceptional class");
    }
}

const std::vector<std::string>& construction_case_labels() {
    static const std::vector<std::string> labels = {
        "Extend/TwoCycles/Cross",
        "Extend/TwoCycles/NoCross",
        "Extend/Case1/OnCycle",
        "Extend/Case1/NoCross",
        "Extend/Case1/Cross",
        "Extend/Case2/BothOnCycle",
        "Extend/Case2/OneOnCycle",
        "Extend/Case2/Together",
        "Extend/Case2/Apart",
        "Faulty/NoFaults",
        "Faulty/SingleEdge",
        "Faulty/Case1.1",
        "Faulty/Case1.2.1/SingleEdge",
        "Faulty/Case1.2.1/OnCycle",
        "Faulty/Case1.2.1/OffCycle",
        "Faulty/Case1.2.2",
        "Faulty/Case1.3/FaultInHalf",
        "Faulty/Case1.3/NoFaultInHalf",
        "Faulty/Case1.3/TwoEdges",
        "Faulty/Case2",
        "Faulty/Case3/Reduce",
        "Faulty/Case3.1.1/Path",
        "Faulty/Case3.1.1/TwoPaths",
        "Faulty/Case3.1.2",
        "Faulty/Case3.2/FaultInHalf",
        "Faulty/Case3.2/NoFaultInHalf",
    };
    return labels;
}

}  // namespace hcube
