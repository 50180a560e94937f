#include "hcube/verify.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

#include "hcube/constructor.hpp"
#include "hcube/errors.hpp"

namespace hcube {

const char* to_string(Feasibility f) {
    switch (f) {
        case Feasibility::feasible: return "feasible";
        case Feasibility::infeasible: return "infeasible";
        case Feasibility::unknown: return "unknown";
    }
    return "unknown";
}

namespace {

// Edge index used by the cycle tables: lo * n + dim, below 64 for n <= 4.
std::uint64_t edge_bit(int n, const Edge& e) { return std::uint64_t{1} << (e.lo * static_cast<Vertex>(n) + static_cast<Vertex>(e.dim)); }

std::uint64_t edge_mask(int n, const EdgeSet& s) {
    std::uint64_t m = 0;
    for (const auto& e : s) m |= edge_bit(n, e);
    return m;
}

struct CycleTable {
    std::vector<EdgeSet> cycles;
    std::vector<std::uint64_t> masks;
};

// Plain enumeration of Hamiltonian cycles through vertex 0; each cycle is
// found once per direction and deduplicated by its edge mask.
CycleTable build_cycle_table(int n) {
    const Vertex count = num_vertices(n);
    std::vector<Vertex> path{0};
    std::vector<char> seen(count, 0);
    seen[0] = 1;
    std::set<std::uint64_t> masks;
    std::vector<EdgeSet> cycles;
    auto rec = [&](auto&& self) -> void {
        const Vertex v = path.back();
        if (path.size() == count) {
            if (hamming_distance(v, 0) != 1) return;
            std::vector<Edge> edges;
            for (std::size_t i = 0; i < path.size(); ++i) edges.push_back(Edge::between(path[i], path[(i + 1) % path.size()]));
            EdgeSet s(std::move(edges));
            if (masks.insert(edge_mask(n, s)).second) cycles.push_back(std::move(s));
            return;
        }
        for (int i = 0; i < n; ++i) {
            const Vertex w = v ^ (Vertex{1} << i);
            if (seen[w]) continue;
            seen[w] = 1;
            path.push_back(w);
            self(self);
            path.pop_back();
            seen[w] = 0;
        }
    };
    rec(rec);
    CycleTable t;
    std::sort(cycles.begin(), cycles.end());
    for (const auto& c : cycles) t.masks.push_back(edge_mask(n, c));
    t.cycles = std::move(cycles);
    return t;
}

const CycleTable& cycle_table(int n) {
    static std::once_flag flags[5];
    static CycleTable tables[5];
    std::call_once(flags[n], [n] { tables[n] = build_cycle_table(n); });
    return tables[n];
}

// Depth-first search for n = 5, 6, deliberately simple: extend a path from
// vertex 0, follow required edges as soon as they are touched, and cut when
// an unvisited vertex has fewer than two usable neighbours.
class PlainSearch {
public:
    PlainSearch(int n, const EdgeSet& required, const EdgeSet& forbidden, std::uint64_t limit)
        : n_(n), count_(num_vertices(n)), limit_(limit) {
        usable_.assign(count_, (Vertex{1} << n) - 1);
        partner_.assign(count_, kNoPartner);
        for (const auto& e : forbidden) {
            usable_[e.lo] &= ~(Vertex{1} << e.dim);
            usable_[e.hi] &= ~(Vertex{1} << e.dim);
        }
        for (const auto& e : required) {
            partner_[e.lo] = e.hi;
            partner_[e.hi] = e.lo;
        }
        seen_.assign(count_, 0);
    }

    Feasibility run(std::vector<Vertex>& out) {
        path_.assign(1, 0);
        seen_[0] = 1;
        try {
            if (extend()) {
                out = path_;
                return Feasibility::feasible;
            }
            return Feasibility::infeasible;
        } catch (const BudgetExceeded&) {
            return Feasibility::unknown;
        }
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    static constexpr Vertex kNoPartner = ~Vertex{0};

    bool closes(Vertex v) const {
        if (__builtin_popcount(v) != 1 || !(usable_[v] & v)) return false;
        const Vertex prev = path_[path_.size() - 2];
        if (partner_[v] != kNoPartner && partner_[v] != prev && partner_[v] != 0) return false;
        return partner_[0] == kNoPartner || partner_[0] == path_[1] || partner_[0] == v;
    }

    bool dead_end() const {
        const Vertex v = path_.back();
        for (Vertex w = 0; w < count_; ++w) {
            if (seen_[w]) continue;
            int avail = 0;
            for (int i = 0; i < n_; ++i) {
                if (!(usable_[w] & (Vertex{1} << i))) continue;
                const Vertex z = w ^ (Vertex{1} << i);
                if (!seen_[z] || z == v || z == 0) ++avail;
            }
            if (avail < 2) return true;
        }
        return false;
    }

    bool extend() {
        if (++nodes_ > limit_) throw BudgetExceeded("oracle node limit");
        const Vertex v = path_.back();
        if (path_.size() == count_) return closes(v);
        const Vertex prev = path_.size() > 1 ? path_[path_.size() - 2] : kNoPartner;
        const Vertex forced = partner_[v];
        if (forced != kNoPartner && forced != prev) {
            if (forced == 0) return false;  // the required edge can only be the closing one
            if (seen_[forced]) return false;
            return step(forced);
        }
        for (int i = 0; i < n_; ++i) {
            if (!(usable_[v] & (Vertex{1} << i))) continue;
            const Vertex w = v ^ (Vertex{1} << i);
            if (seen_[w]) continue;
            // w's own required partner, if any, must be v or still reachable
            if (partner_[w] != kNoPartner && partner_[w] != v && seen_[partner_[w]] && partner_[w] != 0) continue;
            if (step(w)) return true;
        }
        return false;
    }

    bool step(Vertex w) {
        if (!(usable_[path_.back()] & (path_.back() ^ w))) return false;
        seen_[w] = 1;
        path_.push_back(w);
        const bool ok = !dead_end() && extend();
        if (!ok) {
            path_.pop_back();
            seen_[w] = 0;
        }
        return ok;
    }

    int n_;
    Vertex count_;
    std::uint64_t limit_;
    std::uint64_t nodes_ = 0;
    std::vector<Vertex> usable_;  // bitmask of usable dimensions per vertex
    std::vector<Vertex> partner_;
    std::vector<char> seen_;
    std::vector<Vertex> path_;
};

void check_instance_edges(int n, const EdgeSet& matching, const EdgeSet& faults) {
    for (const auto* s : {&matching, &faults})
        for (const auto& e : *s)
            if (!e.valid_in(n)) throw ArgumentError("edge outside Q_" + std::to_string(n));
}

}  // namespace

const std::vector<EdgeSet>& all_hamiltonian_cycles(int n) {
    if (n < 2 || n > 4) throw UnsupportedError("the cycle table covers 2 <= n <= 4");
    return cycle_table(n).cycles;
}

OracleVerdict oracle(int n, const EdgeSet& matching, const EdgeSet& faults, std::uint64_t node_limit) {
    if (n < 2 || n > 6) throw UnsupportedError("oracle covers 2 <= n <= 6");
    check_instance_edges(n, matching, faults);
    if (!is_matching(matching)) throw PreconditionError("oracle: M is not a matching");
    OracleVerdict out;
    if (!matching.disjoint(faults)) {
        out.feasibility = Feasibility::infeasible;
        return out;
    }
    if (n <= 4) {
        const auto& t = cycle_table(n);
        const std::uint64_t need = edge_mask(n, matching);
        const std::uint64_t avoid = edge_mask(n, faults);
        for (std::size_t i = 0; i < t.masks.size(); ++i) {
            ++out.nodes;
            if ((t.masks[i] & need) == need && (t.masks[i] & avoid) == 0) {
                out.feasibility = Feasibility::feasible;
                out.witness = assemble_cycle(n, t.cycles[i]);
                return out;
            }
        }
        out.feasibility = Feasibility::infeasible;
        return out;
    }
    PlainSearch search(n, matching, faults, node_limit);
    std::vector<Vertex> seq;
    out.feasibility = search.run(seq);
    out.nodes = search.nodes();
    if (out.feasibility == Feasibility::feasible) {
        HamCycle c{n, std::move(seq)};
        if (!validate_cycle(c, matching, faults).pass())
            throw InternalInvariantError("oracle produced an invalid witness");
        out.witness = std::move(c);
    }
    return out;
}

// --- enumeration ---------------------------------------------------------------

namespace {

void check_sizes(int n, int m_size, int f_size) {
    check_dimension(n);
    if (n > 6) throw UnsupportedError("instance enumeration covers n <= 6");
    if (m_size < 0 || f_size < 0) throw ArgumentError("sizes must be non-negative");
}

// Visits every matching of the given size as a list of indices into `edges`.
void for_each_matching(const std::vector<Edge>& edges, int m_size,
                       const std::function<void(const std::vector<std::size_t>&)>& fn) {
    std::vector<std::size_t> chosen;
    std::uint64_t covered = 0;  // n <= 6, so vertices fit in 64 bits
    auto rec = [&](auto&& self, std::size_t from) -> void {
        if (static_cast<int>(chosen.size()) == m_size) {
            fn(chosen);
            return;
        }
        for (std::size_t i = from; i < edges.size(); ++i) {
            const std::uint64_t bits = (std::uint64_t{1} << edges[i].lo) | (std::uint64_t{1} << edges[i].hi);
            if (covered & bits) continue;
            covered |= bits;
            chosen.push_back(i);
            self(self, i + 1);
            chosen.pop_back();
            covered &= ~bits;
        }
    };
    rec(rec, 0);
}

std::uint64_t binomial(std::uint64_t a, std::uint64_t b) {
    if (b > a) return 0;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
}

}  // namespace

void for_each_instance(int n, int m_size, int f_size, const std::function<void(const EdgeSet&, const EdgeSet&)>& fn) {
    check_sizes(n, m_size, f_size);
    const EdgeSet all = all_edges(n);
    const std::vector<Edge>& edges = all.edges();
    for_each_matching(edges, m_size, [&](const std::vector<std::size_t>& idx) {
        std::vector<Edge> m;
        std::vector<char> in_m(edges.size(), 0);
        for (std::size_t i : idx) {
            m.push_back(edges[i]);
            in_m[i] = 1;
        }
        const EdgeSet matching(std::move(m));
        std::vector<Edge> rest;
        for (std::size_t i = 0; i < edges.size(); ++i)
            if (!in_m[i]) rest.push_back(edges[i]);
        std::vector<std::size_t> pick;
        auto rec = [&](auto&& self, std::size_t from) -> void {
            if (static_cast<int>(pick.size()) == f_size) {
                std::vector<Edge> f;
                for (std::size_t i : pick) f.push_back(rest[i]);
                fn(matching, EdgeSet(std::move(f)));
                return;
            }
            for (std::size_t i = from; i < rest.size(); ++i) {
                pick.push_back(i);
                self(self, i + 1);
                pick.pop_back();
            }
        };
        rec(rec, 0);
    });
}

std::uint64_t count_instances(int n, int m_size, int f_size) {
    check_sizes(n, m_size, f_size);
    const EdgeSet all = all_edges(n);
    std::uint64_t matchings = 0;
    for_each_matching(all.edges(), m_size, [&](const std::vector<std::size_t>&) { ++matchings; });
    return matchings * binomial(all.size() - static_cast<std::size_t>(m_size), static_cast<std::uint64_t>(f_size));
}

std::vector<InstanceClass> enumerate_classes(int n, int m_size, int f_size) {
    check_sizes(n, m_size, f_size);
    static std::mutex mu;
    static std::map<std::tuple<int, int, int>, std::vector<InstanceClass>> cache;
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find({n, m_size, f_size}); it != cache.end()) return it->second;
    }
    std::vector<InstanceClass> result;
    if (m_size == 0 && f_size == 0) {
        result.push_back(canonicalize(n, {}, {}));
    } else {
        // Canonical augmentation: every class with one more edge arises from
        // some class with one edge fewer, so extending all representatives by
        // every admissible edge and canonicalising reaches each class.
        const bool grow_faults = f_size > 0;
        const auto parents = enumerate_classes(n, grow_faults ? m_size : m_size - 1, grow_faults ? f_size - 1 : 0);
        std::set<InstanceClass> seen;
        const EdgeSet all = all_edges(n);
        for (const auto& p : parents) {
            for (const auto& e : all) {
                if (p.matching.contains(e) || p.faults.contains(e)) continue;
                EdgeSet m = p.matching;
                EdgeSet f = p.faults;
                if (grow_faults) {
                    f.insert(e);
                } else {
                    bool clash = false;
                    for (const auto& g : m) clash = clash || g.touches(e);
                    if (clash) continue;
                    m.insert(e);
                }
                seen.insert(canonicalize(n, m, f));
            }
        }
        result.assign(seen.begin(), seen.end());
    }
    std::lock_guard lock(mu);
    cache.emplace(std::make_tuple(n, m_size, f_size), result);
    return result;
}

std::vector<InstanceClass> enumerate_instances(int n, int m_size, int f_size, bool up_to_iso) {
    if (up_to_iso) return enumerate_classes(n, m_size, f_size);
    std::vector<InstanceClass> out;
    for_each_instance(n, m_size, f_size,
                      [&](const EdgeSet& m, const EdgeSet& f) { out.push_back(InstanceClass{n, m, f}); });
    return out;
}

std::uint64_t orbit_size_total(int n, const std::vector<InstanceClass>& classes) {
    const std::uint64_t order = Automorphism::group_order(n);
    std::uint64_t total = 0;
    for (const auto& c : classes) total += order / stabilizer_order(n, c.matching, c.faults);
    return total;
}

int count_matching_vertex_classes(int n, int m_size) {
    check_sizes(n, m_size, 0);
    std::vector<Automorphism> group;
    for_each_automorphism(n, [&](const Automorphism& g) { group.push_back(g); });
    std::set<std::pair<EdgeSet, Vertex>> classes;
    for_each_instance(n, m_size, 0, [&](const EdgeSet& m, const EdgeSet&) {
        std::vector<char> covered(num_vertices(n), 0);
        for (const auto& e : m) covered[e.lo] = covered[e.hi] = 1;
        for (Vertex u = 0; u < num_vertices(n); ++u) {
            if (covered[u]) continue;
            std::optional<std::pair<EdgeSet, Vertex>> best;
            for (const auto& g : group) {
                std::pair<EdgeSet, Vertex> image{g.apply(m), g.apply(u)};
                if (!best || image < *best) best = std::move(image);
            }
            classes.insert(*best);
        }
    });
    return static_cast<int>(classes.size());
}

EdgeSet random_matching(int n, int m_size, std::mt19937_64& rng) {
    check_dimension(n);
    if (m_size < 0 || static_cast<Vertex>(m_size) > num_vertices(n) / 2)
        throw ArgumentError("no matching of size " + std::to_string(m_size) + " in Q_" + std::to_string(n));
    const EdgeSet all = all_edges(n);
    std::vector<Edge> pool(all.begin(), all.end());
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<char> covered(num_vertices(n), 0);
        std::vector<Edge> chosen;
        for (const auto& e : pool) {
            if (static_cast<int>(chosen.size()) == m_size) break;
            if (covered[e.lo] || covered[e.hi]) continue;
            covered[e.lo] = covered[e.hi] = 1;
            chosen.push_back(e);
        }
        if (static_cast<int>(chosen.size()) == m_size) return EdgeSet(std::move(chosen));
    }
    throw InternalInvariantError("random_matching: greedy sampling did not reach the requested size");
}

EdgeSet random_edges(int n, int f_size, const EdgeSet& avoid, std::mt19937_64& rng) {
    const EdgeSet all = all_edges(n);
    std::vector<Edge> pool;
    for (const auto& e : all)
        if (!avoid.contains(e)) pool.push_back(e);
    if (f_size < 0 || static_cast<std::size_t>(f_size) > pool.size()) throw ArgumentError("too many edges requested");
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(static_cast<std::size_t>(f_size));
    return EdgeSet(std::move(pool));
}

// --- sweeps ------------------------------------------------------------------

int max_faults(int theorem, int n, int m_size) {
    if (theorem == 1) return 0;
    return n - 1 - (m_size + 1) / 2;
}

std::vector<SweepCell> legal_cells(int theorem, int n) {
    std::vector<SweepCell> cells;
    if (theorem == 1) {
        const int top = std::min(2 * n - 1, static_cast<int>(num_vertices(n) / 2));
        for (int m = 0; m <= top; ++m) cells.push_back({m, 0});
    } else if (theorem == 2) {
        for (int m = 1; m <= 2 * n - 2; ++m)
            for (int f = 0; f <= max_faults(2, n, m); ++f) cells.push_back({m, f});
    } else {
        throw ArgumentError("theorem must be 1 or 2");
    }
    return cells;
}

namespace {

void check_cell(int theorem, int n, SweepCell cell) {
    check_dimension(n);
    if (theorem == 1) {
        if (n < 2) throw ArgumentError("theorem 1 needs n >= 2");
        if (cell.f_size != 0) throw ArgumentError("theorem 1 has no faulty edges");
        if (cell.m_size < 0 || cell.m_size > 2 * n - 1 || static_cast<Vertex>(cell.m_size) > num_vertices(n) / 2)
            throw ArgumentError("theorem 1 cell needs 0 <= |M| <= min(2n - 1, 2^(n-1))");
    } else if (theorem == 2) {
        if (n < 4) throw ArgumentError("theorem 2 needs n >= 4");
        if (cell.m_size < 1 || cell.m_size > 2 * n - 2) throw ArgumentError("theorem 2 cell needs 1 <= |M| <= 2n - 2");
        if (cell.f_size < 0 || cell.f_size > max_faults(2, n, cell.m_size))
            throw ArgumentError("theorem 2 cell needs |F| <= n - 1 - ceil(|M|/2)");
    } else {
        throw ArgumentError("theorem must be 1 or 2");
    }
}

constexpr std::size_t kMaxMessages = 10;

}  // namespace

SweepReport sweep(int theorem, int n, SweepCell cell, const SweepOptions& options) {
    check_cell(theorem, n, cell);
    SweepReport r;
    r.theorem = theorem;
    r.n = n;
    r.cell = cell;
    r.sampled = options.samples > 0;
    const auto start = std::chrono::steady_clock::now();

    std::vector<InstanceClass> instances;
    if (r.sampled) {
        r.seed = options.seed;
        std::mt19937_64 rng(options.seed);
        instances.reserve(options.samples);
        for (std::uint64_t k = 0; k < options.samples; ++k) {
            EdgeSet m = random_matching(n, cell.m_size, rng);
            EdgeSet f = random_edges(n, cell.f_size, m, rng);
            instances.push_back(InstanceClass{n, std::move(m), std::move(f)});
        }
    } else {
        instances = enumerate_classes(n, cell.m_size, cell.f_size);
    }

    auto fail = [&](const InstanceClass& inst, const std::string& why) {
        ++r.failures;
        if (r.failure_messages.size() < kMaxMessages) {
            std::ostringstream os;
            os << "M=" << inst.matching << " F=" << inst.faults << ": " << why;
            r.failure_messages.push_back(os.str());
        }
    };

    for (const auto& inst : instances) {
        ++r.tested;
        ConstructionTrace trace;
        std::optional<HamCycle> cycle;
        bool case_a = false;
        try {
            if (theorem == 1) {
                cycle = extend_matching(n, inst.matching, &trace);
            } else {
                FaultyOutcome out = extend_matching_faulty(n, inst.matching, inst.faults, &trace);
                case_a = out.case_a();
                cycle = std::move(out.cycle);
            }
        } catch (const std::exception& e) {
            fail(inst, e.what());
            continue;
        }
        for (const auto& label : trace.labels()) ++r.label_counts[label];

        if (case_a) {
            if (n != 4) {
                fail(inst, "case-a verdict above n = 4");
                continue;
            }
            const OracleVerdict v = oracle(n, inst.matching, inst.faults);
            ++r.oracle_checked;
            if (v.feasibility == Feasibility::infeasible) {
                ++r.exceptional;
                r.exceptional_instances.push_back({canonicalize(n, inst.matching, inst.faults), v.feasibility});
            } else {
                ++r.disagreements;
                fail(inst, std::string("case-a verdict but oracle says ") + to_string(v.feasibility));
            }
            continue;
        }
        const CycleVerdict verdict = validate_cycle(*cycle, inst.matching, inst.faults);
        if (!verdict.pass()) {
            fail(inst, verdict.problems.empty() ? "invalid cycle" : verdict.problems.front());
            continue;
        }
        ++r.successes;
        if (options.oracle_on_every_instance && n <= 6) {
            const OracleVerdict v = oracle(n, inst.matching, inst.faults);
            ++r.oracle_checked;
            if (v.feasibility == Feasibility::infeasible) {
                ++r.disagreements;
                fail(inst, "constructor found a cycle the oracle calls infeasible");
            }
        }
    }
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::string format_report_line(const SweepReport& r) {
    std::ostringstream os;
    os << "theorem=" << r.theorem << " n=" << r.n << " m=" << r.cell.m_size << " f=" << r.cell.f_size
       << " mode=" << (r.sampled ? "sampled" : "classes");
    if (r.sampled) os << " seed=" << r.seed;
    os << " tested=" << r.tested << " successes=" << r.successes << " exceptional=" << r.exceptional
       << " disagreements=" << r.disagreements << " failures=" << r.failures << " oracle_checked=" << r.oracle_checked
       << " seconds=" << std::fixed << std::setprecision(3) << r.wall_seconds
       << " status=" << (r.pass() ? "pass" : "FAIL");
    return os.str();
}

}  // namespace hcube
