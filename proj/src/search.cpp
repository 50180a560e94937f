#include "hcube/search.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <numeric>
#include <string>

#include "hcube/errors.hpp"

namespace hcube {

SearchBudget SearchBudget::from_env() {
    SearchBudget b;
    if (const char* s = std::getenv("HCUBE_SEARCH_BUDGET")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(s, &end, 10);
        if (end != s && *end == '\0' && v > 0) b.node_limit = v;
    }
    return b;
}

namespace {

constexpr int kNone = -1;
constexpr int kMaxSearchDimension = 10;

struct BudgetHit {};

struct Problem {
    int n = 0;
    bool cycle = true;
    int start = kNone;
    int target = kNone;
    std::vector<std::pair<int, int>> required;  // includes the link
    std::optional<std::pair<int, int>> link;   // directed: `first` must be followed by `second`
    std::vector<char> forbidden;               // indexed by lo * n + dim
};

class Engine {
public:
    Engine(const Problem& p, std::uint64_t limit) : p_(p), limit_(limit) {
        n_ = p.n;
        N_ = 1 << n_;
        stride_ = n_ + 1;
        adj_.assign(static_cast<std::size_t>(N_ * stride_), kNone);
        deg_.assign(static_cast<std::size_t>(N_), 0);
        for (int v = 0; v < N_; ++v) {
            for (int i = 0; i < n_; ++i) {
                const int w = v ^ (1 << i);
                const int lo = std::min(v, w);
                if (p.forbidden[static_cast<std::size_t>(lo * n_ + i)]) continue;
                add_arc(v, w);
            }
        }
        if (p.link) {
            const auto [a, b] = *p.link;
            if (!has_arc(a, b)) {
                add_arc(a, b);
                add_arc(b, a);
            }
        }
        bipartite_ = !p.link || parity(static_cast<Vertex>(p.link->first)) != parity(static_cast<Vertex>(p.link->second));
    }

    SolveStatus run(std::vector<Vertex>& out, std::uint64_t& nodes) {
        SolveStatus status = SolveStatus::infeasible;
        try {
            if (prepare(out)) {
                status = out.empty() ? (dfs(path_.back()) ? SolveStatus::found : SolveStatus::infeasible)
                                     : SolveStatus::found;
                if (status == SolveStatus::found && out.empty())
                    for (int v : path_) out.push_back(static_cast<Vertex>(v));
            }
        } catch (const BudgetHit&) {
            status = SolveStatus::budget_exceeded;
        }
        nodes = nodes_;
        if (status != SolveStatus::found) out.clear();
        return status;
    }

private:
    void add_arc(int v, int w) { adj_[static_cast<std::size_t>(v * stride_ + deg_[static_cast<std::size_t>(v)]++)] = w; }

    bool has_arc(int v, int w) const {
        for (int k = 0; k < deg(v); ++k)
            if (nb(v, k) == w) return true;
        return false;
    }

    int deg(int v) const { return deg_[static_cast<std::size_t>(v)]; }
    int nb(int v, int k) const { return adj_[static_cast<std::size_t>(v * stride_ + k)]; }

    // Returns false if trivially infeasible; fills `out` when the required
    // edges already form the answer.
    bool prepare(std::vector<Vertex>& out) {
        req_.assign(static_cast<std::size_t>(N_), {kNone, kNone});
        req_count_.assign(static_cast<std::size_t>(N_), 0);
        std::vector<int> parent(static_cast<std::size_t>(N_));
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int v) {
            while (parent[static_cast<std::size_t>(v)] != v) {
                parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
                v = parent[static_cast<std::size_t>(v)];
            }
            return v;
        };
        bool closed_cycle = false;
        for (const auto& [a, b] : p_.required) {
            for (int v : {a, b}) {
                if (req_count_[static_cast<std::size_t>(v)] == 2) return false;
            }
            req_[static_cast<std::size_t>(a)][static_cast<std::size_t>(req_count_[static_cast<std::size_t>(a)]++)] = b;
            req_[static_cast<std::size_t>(b)][static_cast<std::size_t>(req_count_[static_cast<std::size_t>(b)]++)] = a;
            const int ra = find(a);
            const int rb = find(b);
            if (ra == rb)
                closed_cycle = true;
            else
                parent[static_cast<std::size_t>(ra)] = rb;
        }
        if (closed_cycle) {
            // Only acceptable when the required edges are themselves the answer.
            if (!p_.cycle || static_cast<int>(p_.required.size()) != N_) return false;
            int prev = kNone;
            int cur = 0;
            for (int k = 0; k < N_; ++k) {
                if (req_count_[static_cast<std::size_t>(cur)] != 2) return false;
                out.push_back(static_cast<Vertex>(cur));
                const auto& r = req_[static_cast<std::size_t>(cur)];
                const int next = r[0] != prev ? r[0] : r[1];
                prev = cur;
                cur = next;
            }
            if (cur != 0) {
                out.clear();
                return false;
            }
            std::vector<char> seen(static_cast<std::size_t>(N_), 0);
            for (Vertex v : out) {
                if (seen[v]) {
                    out.clear();
                    return false;
                }
                seen[v] = 1;
            }
            return true;
        }

        if (p_.cycle && N_ < 4) return false;
        for (int v = 0; v < N_; ++v) {
            const bool endpoint = !p_.cycle && (v == p_.start || v == p_.target);
            if (deg(v) < (endpoint ? 1 : 2)) return false;
            if (endpoint && req_count_[static_cast<std::size_t>(v)] > 1) return false;
        }

        int start = p_.start;
        if (p_.cycle) {
            start = kNone;
            for (int v = 0; v < N_ && start == kNone; ++v)
                if (req_count_[static_cast<std::size_t>(v)] == 1) start = v;
            if (start == kNone) {
                start = 0;
                for (int v = 1; v < N_; ++v)
                    if (deg(v) < deg(start)) start = v;
            }
        }
        start_ = start;

        visited_.assign(static_cast<std::size_t>(N_), 0);
        prev_.assign(static_cast<std::size_t>(N_), kNone);
        open_.assign(deg_.begin(), deg_.end());
        stamp_.assign(static_cast<std::size_t>(N_), 0);
        queue_.assign(static_cast<std::size_t>(N_), 0);
        left_[0] = left_[1] = 0;
        for (int v = 0; v < N_; ++v) ++left_[parity(static_cast<Vertex>(v))];

        visited_[static_cast<std::size_t>(start)] = 1;
        --left_[parity(static_cast<Vertex>(start))];
        count_ = 1;
        path_.clear();
        path_.reserve(static_cast<std::size_t>(N_));
        path_.push_back(start);
        if (!p_.cycle && N_ == 2) {
            // Q_1: the only path.
            if (has_arc(p_.start, p_.target)) {
                path_.push_back(p_.target);
                for (int v : path_) out.push_back(static_cast<Vertex>(v));
                return true;
            }
            return false;
        }
        return true;
    }

    bool closes(int c) const { return !(p_.cycle && c == start_); }

    bool can_enter(int c, int w) const {
        if (!p_.cycle && w == p_.target && count_ + 1 != N_) return false;
        if (p_.link && w == p_.link->second && c != p_.link->first) return false;
        const int rc = req_count_[static_cast<std::size_t>(w)];
        const auto& r = req_[static_cast<std::size_t>(w)];
        if (rc == 2) return r[0] == c || r[1] == c;
        if (rc == 1 && r[0] != c) {
            if (!p_.cycle && w == p_.target) return false;
            const int q = r[0];
            if (visited_[static_cast<std::size_t>(q)]) return p_.cycle && q == start_ && count_ + 1 == N_;
        }
        return true;
    }

    bool finish(int c) const {
        if (!p_.cycle) return c == p_.target;
        if (!has_arc(c, start_)) return false;
        const int rc = req_count_[static_cast<std::size_t>(c)];
        for (int k = 0; k < rc; ++k) {
            const int q = req_[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
            if (q != prev_[static_cast<std::size_t>(c)] && q != start_) return false;
        }
        if (req_count_[static_cast<std::size_t>(start_)] == 2 && req_[static_cast<std::size_t>(start_)][1] != c)
            return false;
        return true;
    }

    bool dfs(int c) {
        if (count_ == N_) return finish(c);

        int forced = kNone;
        if (c == start_) {
            if (req_count_[static_cast<std::size_t>(c)] > 0) forced = req_[static_cast<std::size_t>(c)][0];
        } else {
            const int rc = req_count_[static_cast<std::size_t>(c)];
            for (int k = 0; k < rc; ++k) {
                const int q = req_[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
                if (q == prev_[static_cast<std::size_t>(c)]) continue;
                if (forced != kNone) return false;
                forced = q;
            }
        }
        if (forced != kNone) {
            if (visited_[static_cast<std::size_t>(forced)] || !can_enter(c, forced)) return false;
            return try_move(c, forced);
        }

        std::array<int, kMaxDimension + 2> cand{};
        int m = 0;
        for (int k = 0; k < deg(c); ++k) {
            const int w = nb(c, k);
            if (visited_[static_cast<std::size_t>(w)] || !can_enter(c, w)) continue;
            cand[static_cast<std::size_t>(m++)] = w;
        }
        // fewest open continuations first, ties by index
        std::sort(cand.begin(), cand.begin() + m, [&](int a, int b) {
            const int oa = open_[static_cast<std::size_t>(a)];
            const int ob = open_[static_cast<std::size_t>(b)];
            return oa != ob ? oa < ob : a < b;
        });
        for (int k = 0; k < m; ++k)
            if (try_move(c, cand[static_cast<std::size_t>(k)])) return true;
        return false;
    }

    bool try_move(int c, int w) {
        if (++nodes_ > limit_) throw BudgetHit{};
        const bool closing = closes(c);
        visited_[static_cast<std::size_t>(w)] = 1;
        prev_[static_cast<std::size_t>(w)] = c;
        path_.push_back(w);
        ++count_;
        --left_[parity(static_cast<Vertex>(w))];
        if (closing)
            for (int k = 0; k < deg(c); ++k) --open_[static_cast<std::size_t>(nb(c, k))];

        if (viable(c, w, closing) && dfs(w)) return true;

        if (closing)
            for (int k = 0; k < deg(c); ++k) ++open_[static_cast<std::size_t>(nb(c, k))];
        ++left_[parity(static_cast<Vertex>(w))];
        --count_;
        path_.pop_back();
        prev_[static_cast<std::size_t>(w)] = kNone;
        visited_[static_cast<std::size_t>(w)] = 0;
        return false;
    }

    bool viable(int c, int w, bool closing) {
        const int remaining = N_ - count_;
        if (remaining == 0) return true;
        if (closing) {
            for (int k = 0; k < deg(c); ++k) {
                const int z = nb(c, k);
                if (visited_[static_cast<std::size_t>(z)]) {
                    if (p_.cycle && z == start_ && open_[static_cast<std::size_t>(z)] < 1) return false;
                    continue;
                }
                const int need = (!p_.cycle && z == p_.target) ? 1 : 2;
                if (open_[static_cast<std::size_t>(z)] < need) return false;
            }
        }
        if (bipartite_) {
            const int cw = parity(static_cast<Vertex>(w));
            if (left_[cw ^ 1] != (remaining + 1) / 2 || left_[cw] != remaining / 2) return false;
            if (p_.cycle && parity(static_cast<Vertex>(start_)) != (cw ^ ((remaining + 1) & 1))) return false;
        }
        // every unvisited vertex reachable from w through unvisited vertices
        ++stamp_id_;
        int head = 0;
        int tail = 0;
        int reached = 0;
        queue_[static_cast<std::size_t>(tail++)] = w;
        stamp_[static_cast<std::size_t>(w)] = stamp_id_;
        while (head < tail) {
            const int v = queue_[static_cast<std::size_t>(head++)];
            for (int k = 0; k < deg(v); ++k) {
                const int z = nb(v, k);
                if (visited_[static_cast<std::size_t>(z)] || stamp_[static_cast<std::size_t>(z)] == stamp_id_) continue;
                stamp_[static_cast<std::size_t>(z)] = stamp_id_;
                queue_[static_cast<std::size_t>(tail++)] = z;
                ++reached;
            }
        }
        return reached == remaining;
    }

    const Problem& p_;
    std::uint64_t limit_;
    std::uint64_t nodes_ = 0;
    int n_ = 0;
    int N_ = 0;
    int stride_ = 0;
    std::vector<int> adj_;
    std::vector<int> deg_;
    bool bipartite_ = true;

    std::vector<std::array<int, 2>> req_;
    std::vector<int> req_count_;
    int start_ = kNone;
    std::vector<char> visited_;
    std::vector<int> prev_;
    std::vector<int> open_;
    std::vector<int> path_;
    int count_ = 0;
    int left_[2] = {0, 0};
    std::vector<int> stamp_;
    int stamp_id_ = 0;
    std::vector<int> queue_;
};

Problem base_problem(int n, const EdgeSet& required, const EdgeSet& forbidden) {
    check_dimension(n);
    if (n > kMaxSearchDimension)
        throw UnsupportedError("search backend is limited to n <= " + std::to_string(kMaxSearchDimension));
    for (const auto* s : {&required, &forbidden})
        for (const auto& e : *s)
            if (!e.valid_in(n)) throw ArgumentError("edge outside Q_n");
    if (!required.disjoint(forbidden)) throw PreconditionError("required and forbidden edges overlap");
    Problem p;
    p.n = n;
    p.forbidden.assign(num_vertices(n) * static_cast<std::size_t>(n), 0);
    for (const auto& e : forbidden) p.forbidden[e.lo * static_cast<std::size_t>(n) + static_cast<std::size_t>(e.dim)] = 1;
    for (const auto& e : required) p.required.emplace_back(static_cast<int>(e.lo), static_cast<int>(e.hi));
    return p;
}

void check_vertex(int n, Vertex v) {
    if (v >= num_vertices(n)) throw ArgumentError("vertex " + std::to_string(v) + " outside Q_n");
}

int map_vertex(const Automorphism& g, int v) { return v == kNone ? kNone : static_cast<int>(g.apply(static_cast<Vertex>(v))); }

Problem transform(const Problem& p, const Automorphism& g) {
    Problem q;
    q.n = p.n;
    q.cycle = p.cycle;
    q.start = map_vertex(g, p.start);
    q.target = map_vertex(g, p.target);
    for (const auto& [a, b] : p.required) q.required.emplace_back(map_vertex(g, a), map_vertex(g, b));
    if (p.link) q.link = std::make_pair(map_vertex(g, p.link->first), map_vertex(g, p.link->second));
    const auto n = static_cast<std::size_t>(p.n);
    q.forbidden.assign(p.forbidden.size(), 0);
    for (std::size_t k = 0; k < p.forbidden.size(); ++k) {
        if (!p.forbidden[k]) continue;
        const Edge e = g.apply(Edge::along(static_cast<Vertex>(k / n), static_cast<int>(k % n)));
        q.forbidden[e.lo * n + static_cast<std::size_t>(e.dim)] = 1;
    }
    return q;
}

// Deterministic relabelling used for restart number k > 0.
Automorphism restart_relabelling(int n, std::uint64_t k) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t h = k * 0x9E3779B97F4A7C15ULL;
    for (std::size_t i = perm.size(); i > 1; --i) {
        h ^= h >> 29;
        h *= 0xBF58476D1CE4E5B9ULL;
        std::swap(perm[i - 1], perm[h % i]);
    }
    h ^= h >> 31;
    return Automorphism(std::move(perm), static_cast<Vertex>(h) & (num_vertices(n) - 1));
}

// Runs the engine on relabelled copies of the problem with geometrically
// growing node limits. Backtracking on Hamiltonicity has heavy-tailed
// running time, so a fresh labelling usually escapes a bad subtree long
// before the original run would. A run that finishes without hitting its
// limit is conclusive either way.
SolveResult run_with_restarts(const Problem& p, std::uint64_t total) {
    SolveResult r;
    std::uint64_t used = 0;
    std::uint64_t slice = 20'000;
    for (std::uint64_t k = 0; used < total; ++k) {
        const std::uint64_t limit = std::min(slice, total - used);
        const Automorphism g = k == 0 ? Automorphism::identity(p.n) : restart_relabelling(p.n, k);
        std::vector<Vertex> seq;
        std::uint64_t nodes = 0;
        const Problem relabelled = k == 0 ? p : transform(p, g);
        Engine engine(relabelled, limit);
        const SolveStatus status = engine.run(seq, nodes);
        used += nodes;
        if (status != SolveStatus::budget_exceeded) {
            r.status = status;
            if (status == SolveStatus::found) {
                const Automorphism back = g.inverse();
                for (Vertex v : seq) r.seq.push_back(back.apply(v));
            }
            r.nodes = used;
            return r;
        }
        if (k % 2 == 1) slice *= 4;
    }
    r.status = SolveStatus::budget_exceeded;
    r.nodes = used;
    return r;
}

}  // namespace

SolveResult solve(const PathQuery& q, const SearchBudget& budget) {
    Problem p = base_problem(q.n, q.required, q.forbidden);
    if (q.endpoints) {
        const auto [x, y] = *q.endpoints;
        check_vertex(q.n, x);
        check_vertex(q.n, y);
        if (x == y) throw PreconditionError("path endpoints must be distinct");
        p.cycle = false;
        p.start = static_cast<int>(x);
        p.target = static_cast<int>(y);
    }
    return run_with_restarts(p, budget.node_limit);
}

SolveResult solve_spanning_pair(int n, Vertex x, Vertex y, Vertex u, Vertex v, bool pin_xy, const EdgeSet& forbidden,
                                const SearchBudget& budget) {
    EdgeSet required;
    if (pin_xy) required.insert(Edge::between(x, y));
    Problem p = base_problem(n, required, forbidden);
    for (Vertex a : {x, y, u, v}) check_vertex(n, a);
    const std::array<Vertex, 4> ends{x, y, u, v};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t k = i + 1; k < 4; ++k)
            if (ends[i] == ends[k]) throw PreconditionError("spanning pair endpoints must be pairwise distinct");
    p.cycle = false;
    p.start = static_cast<int>(x);
    p.target = static_cast<int>(v);
    p.link = std::make_pair(static_cast<int>(y), static_cast<int>(u));
    p.required.emplace_back(static_cast<int>(y), static_cast<int>(u));
    return run_with_restarts(p, budget.node_limit);
}

}  // namespace hcube
