#include "hcube/cube.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <ostream>
#include <sstream>

#include "hcube/errors.hpp"

namespace hcube {

void check_dimension(int n) {
    if (n < 1 || n > kMaxDimension)
        throw ArgumentError("dimension " + std::to_string(n) + " outside [1, " +
                            std::to_string(kMaxDimension) + "]");
}

Vertex neighbor(int n, Vertex v, int i) {
    if (i < 0 || i >= n)
        throw ArgumentError("bit index " + std::to_string(i) + " outside [0, " + std::to_string(n) + ")");
    return v ^ (Vertex{1} << i);
}

int hamming_distance(Vertex u, Vertex v) { return __builtin_popcount(u ^ v); }

Edge Edge::between(Vertex a, Vertex b) {
    const Vertex x = a ^ b;
    if (x == 0 || (x & (x - 1)) != 0) {
        std::ostringstream os;
        os << "vertices " << a << " and " << b << " are not adjacent";
        throw ArgumentError(os.str());
    }
    return Edge{std::min(a, b), std::max(a, b), __builtin_ctz(x)};
}

Edge Edge::along(Vertex v, int dim) {
    const Vertex lo = v & ~(Vertex{1} << dim);
    return Edge{lo, lo | (Vertex{1} << dim), dim};
}

bool Edge::valid_in(int n) const {
    return dim >= 0 && dim < n && hi < num_vertices(n) && (lo ^ hi) == (Vertex{1} << dim) && lo < hi;
}

std::ostream& operator<<(std::ostream& os, const Edge& e) { return os << e.lo << '-' << e.hi; }

int edge_distance(const Edge& e, const Edge& f) {
    return std::min({hamming_distance(e.lo, f.lo), hamming_distance(e.lo, f.hi),
                     hamming_distance(e.hi, f.lo), hamming_distance(e.hi, f.hi)});
}

// --- EdgeSet ----------------------------------------------------------------

EdgeSet::EdgeSet(std::initializer_list<Edge> edges) : EdgeSet(std::vector<Edge>(edges)) {}

EdgeSet::EdgeSet(std::vector<Edge> edges) : edges_(std::move(edges)) {
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool EdgeSet::contains(const Edge& e) const { return std::binary_search(edges_.begin(), edges_.end(), e); }

bool EdgeSet::insert(const Edge& e) {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it != edges_.end() && *it == e) return false;
    edges_.insert(it, e);
    return true;
}

bool EdgeSet::erase(const Edge& e) {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) return false;
    edges_.erase(it);
    return true;
}

EdgeSet EdgeSet::unite(const EdgeSet& other) const {
    EdgeSet out;
    std::set_union(edges_.begin(), edges_.end(), other.edges_.begin(), other.edges_.end(),
                   std::back_inserter(out.edges_));
    return out;
}

EdgeSet EdgeSet::minus(const EdgeSet& other) const {
    EdgeSet out;
    std::set_difference(edges_.begin(), edges_.end(), other.edges_.begin(), other.edges_.end(),
                        std::back_inserter(out.edges_));
    return out;
}

EdgeSet EdgeSet::intersect(const EdgeSet& other) const {
    EdgeSet out;
    std::set_intersection(edges_.begin(), edges_.end(), other.edges_.begin(), other.edges_.end(),
                          std::back_inserter(out.edges_));
    return out;
}

bool EdgeSet::disjoint(const EdgeSet& other) const { return intersect(other).empty(); }

int EdgeSet::count_in_dim(int i) const {
    return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [i](const Edge& e) { return e.dim == i; }));
}

std::ostream& operator<<(std::ostream& os, const EdgeSet& s) {
    os << '{';
    bool first = true;
    for (const auto& e : s) {
        if (!first) os << ',';
        os << e;
        first = false;
    }
    return os << '}';
}

EdgeSet all_edges(int n) {
    check_dimension(n);
    std::vector<Edge> out;
    out.reserve(num_edges(n));
    for (Vertex v = 0; v < num_vertices(n); ++v)
        for (int i = 0; i < n; ++i)
            if (!(v >> i & 1U)) out.push_back(Edge{v, v | (Vertex{1} << i), i});
    return EdgeSet(std::move(out));
}

// --- SubcubeSplit -----------------------------------------------------------

SubcubeSplit::SubcubeSplit(int n, int j) : n_(n), j_(j), low_mask_((Vertex{1} << j) - 1) {
    check_dimension(n);
    if (n < 2) throw ArgumentError("cannot split Q_1");
    if (j < 0 || j >= n) throw ArgumentError("split dimension " + std::to_string(j) + " out of range");
}

Vertex SubcubeSplit::project(Vertex v) const { return (v & low_mask_) | ((v >> (j_ + 1)) << j_); }

Vertex SubcubeSplit::lift(Vertex w, int side) const {
    return (w & low_mask_) | (static_cast<Vertex>(side) << j_) | ((w >> j_) << (j_ + 1));
}

Edge SubcubeSplit::project(const Edge& e) const {
    if (crosses(e)) throw ArgumentError("cannot project a crossing edge");
    return Edge::between(project(e.lo), project(e.hi));
}

Edge SubcubeSplit::lift(const Edge& e, int side) const {
    return Edge::between(lift(e.lo, side), lift(e.hi, side));
}

EdgeSet SubcubeSplit::lift(const EdgeSet& s, int side) const {
    std::vector<Edge> out;
    out.reserve(s.size());
    for (const auto& e : s) out.push_back(lift(e, side));
    return EdgeSet(std::move(out));
}

std::vector<Vertex> SubcubeSplit::lift(std::span<const Vertex> seq, int side) const {
    std::vector<Vertex> out;
    out.reserve(seq.size());
    for (Vertex w : seq) out.push_back(lift(w, side));
    return out;
}

SplitParts split(int n, int j, const EdgeSet& matching, const EdgeSet& faults) {
    SplitParts parts{SubcubeSplit(n, j), {}, {}, {}, {}};
    const auto& s = parts.split;
    auto distribute = [&](const EdgeSet& in, EdgeSet (&half)[2], EdgeSet& cross) {
        std::vector<Edge> h[2];
        std::vector<Edge> c;
        for (const auto& e : in) {
            if (s.crosses(e))
                c.push_back(e);
            else
                h[s.side(e.lo)].push_back(s.project(e));
        }
        half[0] = EdgeSet(std::move(h[0]));
        half[1] = EdgeSet(std::move(h[1]));
        cross = EdgeSet(std::move(c));
    };
    distribute(matching, parts.matching_half, parts.matching_cross);
    distribute(faults, parts.faults_half, parts.faults_cross);
    return parts;
}

int separate_disjoint_edges(int n, const Edge& e, const Edge& f) {
    if (n < 2) throw ArgumentError("separate_disjoint_edges needs n >= 2");
    if (e.touches(f)) throw PreconditionError("edges are not vertex-disjoint");
    for (int j = 0; j < n; ++j) {
        if (j == e.dim || j == f.dim) continue;
        if (((e.lo >> j) & 1U) != ((f.lo >> j) & 1U)) return j;
    }
    throw InternalInvariantError("no separating dimension for disjoint edges");
}

// --- Automorphism -----------------------------------------------------------

Automorphism Automorphism::identity(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    return Automorphism(std::move(p), 0);
}

Automorphism::Automorphism(std::vector<int> perm, Vertex mask) : perm_(std::move(perm)), mask_(mask) {
    const int n = dimension();
    check_dimension(n);
    std::vector<bool> seen(perm_.size(), false);
    for (int p : perm_) {
        if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)]) throw ArgumentError("not a permutation");
        seen[static_cast<std::size_t>(p)] = true;
    }
    if (mask_ >= num_vertices(n)) throw ArgumentError("mask out of range");
}

namespace {

Vertex permute_bits(const std::vector<int>& perm, Vertex v) {
    Vertex w = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
        if (v >> i & 1U) w |= Vertex{1} << perm[i];
    return w;
}

}  // namespace

Vertex Automorphism::apply(Vertex v) const { return permute_bits(perm_, v) ^ mask_; }

Edge Automorphism::apply(const Edge& e) const { return Edge::between(apply(e.lo), apply(e.hi)); }

EdgeSet Automorphism::apply(const EdgeSet& s) const {
    std::vector<Edge> out;
    out.reserve(s.size());
    for (const auto& e : s) out.push_back(apply(e));
    return EdgeSet(std::move(out));
}

Automorphism Automorphism::compose(const Automorphism& first) const {
    std::vector<int> p(perm_.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = perm_[static_cast<std::size_t>(first.perm_[i])];
    return Automorphism(std::move(p), permute_bits(perm_, first.mask_) ^ mask_);
}

Automorphism Automorphism::inverse() const {
    std::vector<int> inv(perm_.size());
    for (std::size_t i = 0; i < perm_.size(); ++i) inv[static_cast<std::size_t>(perm_[i])] = static_cast<int>(i);
    const Vertex m = permute_bits(inv, mask_);
    return Automorphism(std::move(inv), m);
}

std::uint64_t Automorphism::group_order(int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f << n;
}

// --- canonicalization -------------------------------------------------------

namespace {

// Images are compared as (lo, hi, dim) sequences; dim is a function of
// lo and hi so comparing (lo, hi) pairs packed in 64 bits is enough.
using Key = std::uint64_t;

inline Key pack(Vertex a, Vertex b) {
    const Vertex lo = std::min(a, b);
    const Vertex hi = std::max(a, b);
    return (static_cast<Key>(lo) << 32) | hi;
}

struct Images {
    std::vector<Key> m;
    std::vector<Key> f;
};

class Minimizer {
public:
    Minimizer(const EdgeSet& matching, const EdgeSet& faults) {
        src_m_ = matching.edges();
        src_f_ = faults.edges();
        cur_.m.resize(src_m_.size());
        cur_.f.resize(src_f_.size());
    }

    // table maps each vertex under the bit permutation; mask is xored after.
    void offer(const std::vector<Vertex>& table, Vertex mask) {
        for (std::size_t i = 0; i < src_m_.size(); ++i)
            cur_.m[i] = pack(table[src_m_[i].lo] ^ mask, table[src_m_[i].hi] ^ mask);
        std::sort(cur_.m.begin(), cur_.m.end());
        if (have_best_) {
            const auto c = std::lexicographical_compare_three_way(cur_.m.begin(), cur_.m.end(), best_.m.begin(),
                                                                  best_.m.end());
            if (c > 0) return;
            if (c == 0) {
                fill_faults(table, mask);
                if (!std::lexicographical_compare(cur_.f.begin(), cur_.f.end(), best_.f.begin(), best_.f.end()))
                    return;
                best_.f = cur_.f;
                return;
            }
        }
        fill_faults(table, mask);
        best_ = cur_;
        have_best_ = true;
    }

    EdgeSet result(bool faults) const {
        const auto& keys = faults ? best_.f : best_.m;
        std::vector<Edge> out;
        out.reserve(keys.size());
        for (Key k : keys) out.push_back(Edge::between(static_cast<Vertex>(k >> 32), static_cast<Vertex>(k)));
        return EdgeSet(std::move(out));
    }

private:
    void fill_faults(const std::vector<Vertex>& table, Vertex mask) {
        for (std::size_t i = 0; i < src_f_.size(); ++i)
            cur_.f[i] = pack(table[src_f_[i].lo] ^ mask, table[src_f_[i].hi] ^ mask);
        std::sort(cur_.f.begin(), cur_.f.end());
    }

    std::vector<Edge> src_m_;
    std::vector<Edge> src_f_;
    Images cur_;
    Images best_;
    bool have_best_ = false;
};

std::vector<Vertex> permutation_table(int n, const std::vector<int>& perm) {
    std::vector<Vertex> table(num_vertices(n));
    for (Vertex v = 0; v < num_vertices(n); ++v) table[v] = permute_bits(perm, v);
    return table;
}

}  // namespace

InstanceClass canonicalize(int n, const EdgeSet& matching, const EdgeSet& faults, CanonicalMode mode) {
    check_dimension(n);
    for (const auto* s : {&matching, &faults})
        for (const auto& e : *s)
            if (!e.valid_in(n)) throw ArgumentError("edge outside Q_n");

    Minimizer best(matching, faults);
    std::vector<int> perm(static_cast<std::size_t>(n));

    if (mode == CanonicalMode::brute_force) {
        if (n > 6) throw UnsupportedError("brute-force canonicalization is limited to n <= 6");
        std::iota(perm.begin(), perm.end(), 0);
        do {
            const auto table = permutation_table(n, perm);
            for (Vertex mask = 0; mask < num_vertices(n); ++mask) best.offer(table, mask);
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        // The minimum image starts with the smallest edge {0,1} whenever the
        // first non-empty part is non-empty, so only automorphisms carrying
        // one of its edges onto {0,1} can attain it.
        const EdgeSet& anchor = !matching.empty() ? matching : faults;
        if (anchor.empty()) return InstanceClass{n, {}, {}};
        for (const auto& e : anchor) {
            std::vector<int> rest;
            for (int i = 0; i < n; ++i)
                if (i != e.dim) rest.push_back(i);
            std::vector<int> targets(rest.size());
            std::iota(targets.begin(), targets.end(), 1);
            do {
                perm[static_cast<std::size_t>(e.dim)] = 0;
                for (std::size_t k = 0; k < rest.size(); ++k) perm[static_cast<std::size_t>(rest[k])] = targets[k];
                const auto table = permutation_table(n, perm);
                for (Vertex endpoint : {e.lo, e.hi}) best.offer(table, table[endpoint]);
            } while (std::next_permutation(targets.begin(), targets.end()));
        }
    }
    return InstanceClass{n, best.result(false), best.result(true)};
}

std::uint64_t stabilizer_order(int n, const EdgeSet& matching, const EdgeSet& faults) {
    std::uint64_t count = 0;
    for_each_automorphism(n, [&](const Automorphism& g) {
        if (g.apply(matching) == matching && g.apply(faults) == faults) ++count;
    });
    return count;
}

}  // namespace hcube
