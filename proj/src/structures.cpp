#include "hcube/structures.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <sstream>

#include "hcube/errors.hpp"

namespace hcube {

namespace {

bool adjacent(Vertex a, Vertex b) {
    const Vertex x = a ^ b;
    return x != 0 && (x & (x - 1)) == 0;
}

// Union-find over an arbitrary set of vertex ids.
class Components {
public:
    Vertex find(Vertex v) {
        auto it = parent_.find(v);
        if (it == parent_.end()) {
            parent_.emplace(v, v);
            return v;
        }
        if (it->second == v) return v;
        const Vertex r = find(it->second);
        parent_[v] = r;
        return r;
    }
    bool unite(Vertex a, Vertex b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[a] = b;
        return true;
    }

private:
    std::map<Vertex, Vertex> parent_;
};

}  // namespace

bool is_matching(const EdgeSet& edges) {
    std::vector<Vertex> ends;
    ends.reserve(edges.size() * 2);
    for (const auto& e : edges) {
        ends.push_back(e.lo);
        ends.push_back(e.hi);
    }
    std::sort(ends.begin(), ends.end());
    return std::adjacent_find(ends.begin(), ends.end()) == ends.end();
}

bool is_linear_forest(const EdgeSet& edges) {
    std::map<Vertex, int> degree;
    Components comp;
    for (const auto& e : edges) {
        if (++degree[e.lo] > 2 || ++degree[e.hi] > 2) return false;
        if (!comp.unite(e.lo, e.hi)) return false;
    }
    return true;
}

bool is_perfect_matching(int n, const EdgeSet& edges) {
    return edges.size() == num_vertices(n) / 2 && is_matching(edges);
}

EdgeSet HamPath::edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) out.push_back(Edge::between(seq[i], seq[i + 1]));
    return EdgeSet(std::move(out));
}

EdgeSet HamCycle::edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < seq.size(); ++i) out.push_back(Edge::between(seq[i], seq[(i + 1) % seq.size()]));
    return EdgeSet(std::move(out));
}

std::vector<Edge> edges_in_order(const HamCycle& c) {
    std::vector<Edge> out;
    out.reserve(c.seq.size());
    for (std::size_t i = 0; i < c.seq.size(); ++i) out.push_back(Edge::between(c.seq[i], c.seq[(i + 1) % c.seq.size()]));
    return out;
}

std::size_t position_of(const HamCycle& c, Vertex v) {
    const auto it = std::find(c.seq.begin(), c.seq.end(), v);
    if (it == c.seq.end()) throw ArgumentError("vertex " + std::to_string(v) + " is not on the cycle");
    return static_cast<std::size_t>(it - c.seq.begin());
}

std::pair<Vertex, Vertex> neighbors_on(const HamCycle& c, Vertex v) {
    const std::size_t i = position_of(c, v);
    const std::size_t len = c.seq.size();
    return {c.seq[(i + len - 1) % len], c.seq[(i + 1) % len]};
}

HamCycle normalize(HamCycle c) {
    if (c.seq.size() < 3) return c;
    auto it = std::min_element(c.seq.begin(), c.seq.end());
    std::rotate(c.seq.begin(), it, c.seq.end());
    if (c.seq.back() < c.seq[1]) std::reverse(c.seq.begin() + 1, c.seq.end());
    return c;
}

HamCycle assemble_cycle(int n, const EdgeSet& edges) {
    const Vertex count = num_vertices(n);
    if (edges.size() != count)
        throw InternalInvariantError("cycle assembly: expected " + std::to_string(count) + " edges, got " +
                                     std::to_string(edges.size()));
    constexpr Vertex kNone = ~Vertex{0};
    std::vector<std::array<Vertex, 2>> nb(count, {kNone, kNone});
    auto attach = [&](Vertex a, Vertex b) {
        if (a >= count) throw InternalInvariantError("cycle assembly: vertex outside Q_n");
        auto& slot = nb[a];
        if (slot[0] == kNone)
            slot[0] = b;
        else if (slot[1] == kNone)
            slot[1] = b;
        else
            throw InternalInvariantError("cycle assembly: vertex " + std::to_string(a) + " has degree > 2");
    };
    for (const auto& e : edges) {
        attach(e.lo, e.hi);
        attach(e.hi, e.lo);
    }
    HamCycle c{n, {}};
    c.seq.reserve(count);
    Vertex prev = kNone;
    Vertex cur = 0;
    for (Vertex k = 0; k < count; ++k) {
        if (nb[cur][1] == kNone) throw InternalInvariantError("cycle assembly: vertex of degree < 2");
        c.seq.push_back(cur);
        const Vertex next = nb[cur][0] != prev ? nb[cur][0] : nb[cur][1];
        prev = cur;
        cur = next;
    }
    if (cur != 0) throw InternalInvariantError("cycle assembly: edges form more than one cycle");
    std::vector<bool> seen(count, false);
    for (Vertex v : c.seq) {
        if (seen[v]) throw InternalInvariantError("cycle assembly: edges form more than one cycle");
        seen[v] = true;
    }
    return c;
}

CycleVerdict validate_cycle(std::span<const Vertex> cycle, int n, std::span<const VertexPair> matching,
                            std::span<const VertexPair> faults) {
    CycleVerdict v;
    auto problem = [&](std::string s) { v.problems.push_back(std::move(s)); };
    if (n < 1 || n > kMaxDimension) {
        v.malformed_input = true;
        v.adjacency = v.coverage = v.contains_matching = v.avoids_faults = false;
        problem("dimension out of range");
        return v;
    }
    const Vertex count = num_vertices(n);

    // (a)
    std::vector<Edge> used;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const Vertex a = cycle[i];
        const Vertex b = cycle[(i + 1) % cycle.size()];
        if (a >= count || b >= count || !adjacent(a, b)) {
            v.adjacency = false;
            std::ostringstream os;
            os << "positions " << i << "," << (i + 1) % cycle.size() << ": " << a << " and " << b
               << " are not adjacent in Q_" << n;
            problem(os.str());
        } else {
            used.push_back(Edge::between(a, b));
        }
    }
    if (cycle.size() < 3 && count > 2) v.adjacency = false;
    const EdgeSet cycle_edges(std::move(used));

    // (b)
    std::vector<int> seen(count, 0);
    for (Vertex a : cycle)
        if (a < count) ++seen[a];
    for (Vertex a = 0; a < count; ++a) {
        if (seen[a] != 1) {
            v.coverage = false;
            problem("vertex " + std::to_string(a) + " appears " + std::to_string(seen[a]) + " times");
        }
    }
    if (cycle.size() != count) v.coverage = false;

    auto as_edges = [&](std::span<const VertexPair> pairs, const char* what) {
        std::vector<Edge> out;
        for (const auto& [a, b] : pairs) {
            if (a >= count || b >= count || !adjacent(a, b)) {
                v.malformed_input = true;
                problem(std::string(what) + " pair " + std::to_string(a) + "-" + std::to_string(b) +
                        " is not an edge of Q_" + std::to_string(n));
                continue;
            }
            out.push_back(Edge::between(a, b));
        }
        return EdgeSet(std::move(out));
    };
    const EdgeSet m = as_edges(matching, "matching");
    const EdgeSet f = as_edges(faults, "fault");
    if (!is_matching(m)) {
        v.malformed_input = true;
        problem("matching edges share a vertex");
    }

    // (c)
    if (m.size() != matching.size()) v.contains_matching = false;
    for (const auto& e : m) {
        if (!cycle_edges.contains(e)) {
            v.contains_matching = false;
            std::ostringstream os;
            os << "matching edge " << e << " not on cycle";
            problem(os.str());
        }
    }
    // (d)
    for (const auto& e : f) {
        if (cycle_edges.contains(e)) {
            v.avoids_faults = false;
            std::ostringstream os;
            os << "fault edge " << e << " used by cycle";
            problem(os.str());
        }
    }
    return v;
}

std::vector<VertexPair> to_pairs(const EdgeSet& s) {
    std::vector<VertexPair> out;
    out.reserve(s.size());
    for (const auto& e : s) out.emplace_back(e.lo, e.hi);
    return out;
}

CycleVerdict validate_cycle(const HamCycle& c, const EdgeSet& matching, const EdgeSet& faults) {
    const auto m = to_pairs(matching);
    const auto f = to_pairs(faults);
    return validate_cycle(c.seq, c.n, m, f);
}

namespace {

bool is_path_on(int n, std::span<const Vertex> seq, std::vector<int>& seen) {
    const Vertex count = num_vertices(n);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (seq[i] >= count || seen[seq[i]]++) return false;
        if (i + 1 < seq.size() && !adjacent(seq[i], seq[i + 1])) return false;
    }
    return true;
}

}  // namespace

bool is_ham_path(const HamPath& p, const EdgeSet& required, const EdgeSet& forbidden) {
    if (p.n < 1 || p.n > kMaxDimension || p.seq.size() != num_vertices(p.n)) return false;
    std::vector<int> seen(num_vertices(p.n), 0);
    if (!is_path_on(p.n, p.seq, seen)) return false;
    const EdgeSet used = p.edges();
    for (const auto& e : required)
        if (!used.contains(e)) return false;
    return used.disjoint(forbidden);
}

bool is_spanning_pair(const SpanningPathPair& pp) {
    if (pp.n < 1 || pp.n > kMaxDimension) return false;
    if (pp.first.empty() || pp.second.empty()) return false;
    if (pp.first.size() + pp.second.size() != num_vertices(pp.n)) return false;
    std::vector<int> seen(num_vertices(pp.n), 0);
    return is_path_on(pp.n, pp.first, seen) && is_path_on(pp.n, pp.second, seen);
}

}  // namespace hcube
