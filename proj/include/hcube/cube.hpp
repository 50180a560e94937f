#pragma once

// Vertex and edge arithmetic of the hypercube Q_n, subcube decomposition
// and the automorphism group used for "up to isomorphism" bookkeeping.
//
// Bit position i of a vertex index is coordinate i of the binary string
// (zero-based throughout).

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hcube {

inline constexpr int kMaxDimension = 16;

using Vertex = std::uint32_t;

/// Throws ArgumentError unless 1 <= n <= kMaxDimension.
void check_dimension(int n);

constexpr Vertex num_vertices(int n) { return Vertex{1} << n; }
constexpr std::size_t num_edges(int n) { return static_cast<std::size_t>(n) << (n - 1); }

constexpr int parity(Vertex v) { return __builtin_popcount(v) & 1; }

/// The vertex differing from v in bit i.
Vertex neighbor(int n, Vertex v, int i);

int hamming_distance(Vertex u, Vertex v);

/// An edge of Q_n in normal form: lo < hi, hi = lo | (1 << dim).
struct Edge {
    Vertex lo = 0;
    Vertex hi = 0;
    int dim = 0;

    /// Throws ArgumentError if a and b are not adjacent.
    static Edge between(Vertex a, Vertex b);
    static Edge along(Vertex v, int dim);

    bool has(Vertex v) const { return v == lo || v == hi; }
    Vertex other(Vertex v) const { return v == lo ? hi : lo; }
    bool touches(const Edge& e) const { return has(e.lo) || has(e.hi); }
    bool valid_in(int n) const;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

std::ostream& operator<<(std::ostream& os, const Edge& e);

/// min over the four endpoint distances.
int edge_distance(const Edge& e, const Edge& f);

/// Sorted, duplicate-free set of edges.
class EdgeSet {
public:
    using const_iterator = std::vector<Edge>::const_iterator;

    EdgeSet() = default;
    EdgeSet(std::initializer_list<Edge> edges);
    explicit EdgeSet(std::vector<Edge> edges);

    bool contains(const Edge& e) const;
    bool insert(const Edge& e);
    bool erase(const Edge& e);

    std::size_t size() const { return edges_.size(); }
    bool empty() const { return edges_.empty(); }
    const_iterator begin() const { return edges_.begin(); }
    const_iterator end() const { return edges_.end(); }
    const Edge& operator[](std::size_t i) const { return edges_[i]; }
    const std::vector<Edge>& edges() const { return edges_; }

    EdgeSet unite(const EdgeSet& other) const;
    EdgeSet minus(const EdgeSet& other) const;
    EdgeSet intersect(const EdgeSet& other) const;
    bool disjoint(const EdgeSet& other) const;

    /// Number of edges in the dimension class E_i.
    int count_in_dim(int i) const;

    friend auto operator<=>(const EdgeSet&, const EdgeSet&) = default;

private:
    std::vector<Edge> edges_;
};

std::ostream& operator<<(std::ostream& os, const EdgeSet& s);

/// All edges of Q_n in sorted order.
EdgeSet all_edges(int n);

/// Decomposition of Q_n by E_j into the halves with bit j = 0 and 1.
/// Halves are addressed in Q_{n-1} coordinates by dropping bit j.
class SubcubeSplit {
public:
    SubcubeSplit(int n, int j);

    int parent_dimension() const { return n_; }
    int dim() const { return j_; }

    int side(Vertex v) const { return static_cast<int>((v >> j_) & 1U); }
    Vertex across(Vertex v) const { return v ^ (Vertex{1} << j_); }
    Vertex project(Vertex v) const;
    Vertex lift(Vertex w, int side) const;

    bool crosses(const Edge& e) const { return e.dim == j_; }
    /// Requires !crosses(e).
    Edge project(const Edge& e) const;
    Edge lift(const Edge& e, int side) const;
    EdgeSet lift(const EdgeSet& s, int side) const;
    std::vector<Vertex> lift(std::span<const Vertex> seq, int side) const;

private:
    int n_;
    int j_;
    Vertex low_mask_;
};

/// The seven parts of (M, F) relative to a split on dimension j.
struct SplitParts {
    SubcubeSplit split;
    EdgeSet matching_half[2];  // Q_{n-1} coordinates
    EdgeSet matching_cross;    // M ∩ E_j, Q_n coordinates
    EdgeSet faults_half[2];
    EdgeSet faults_cross;
};

SplitParts split(int n, int j, const EdgeSet& matching, const EdgeSet& faults);

/// A dimension j such that e and f lie in opposite halves after splitting on j.
/// Requires n >= 2 and e, f vertex-disjoint.
int separate_disjoint_edges(int n, const Edge& e, const Edge& f);

/// v -> P(v) xor mask, where P moves bit i to position perm[i].
class Automorphism {
public:
    static Automorphism identity(int n);
    Automorphism(std::vector<int> perm, Vertex mask);

    int dimension() const { return static_cast<int>(perm_.size()); }
    const std::vector<int>& perm() const { return perm_; }
    Vertex mask() const { return mask_; }

    Vertex apply(Vertex v) const;
    Edge apply(const Edge& e) const;
    EdgeSet apply(const EdgeSet& s) const;

    /// (*this) after `first`.
    Automorphism compose(const Automorphism& first) const;
    Automorphism inverse() const;

    /// 2^n * n!
    static std::uint64_t group_order(int n);

    friend bool operator==(const Automorphism&, const Automorphism&) = default;

private:
    std::vector<int> perm_;
    Vertex mask_;
};

/// Calls fn(const Automorphism&) for every element of Aut(Q_n).
template <class Fn>
void for_each_automorphism(int n, Fn&& fn);

/// Canonical representative of (n, M, F) under Aut(Q_n).
struct InstanceClass {
    int n = 0;
    EdgeSet matching;
    EdgeSet faults;

    friend auto operator<=>(const InstanceClass&, const InstanceClass&) = default;
};

enum class CanonicalMode {
    brute_force,  // full group, n <= 6
    pruned,       // only images sending some edge onto {0, 1}; any n
};

/// Lexicographic minimum of (sorted g(M), sorted g(F)) over the group.
InstanceClass canonicalize(int n, const EdgeSet& matching, const EdgeSet& faults,
                           CanonicalMode mode = CanonicalMode::brute_force);

/// Number of automorphisms fixing (M, F) setwise.
std::uint64_t stabilizer_order(int n, const EdgeSet& matching, const EdgeSet& faults);

// --- implementation of templates -------------------------------------------

template <class Fn>
void for_each_automorphism(int n, Fn&& fn) {
    check_dimension(n);
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::vector<int> p = perm;
    do {
        for (Vertex mask = 0; mask < num_vertices(n); ++mask) fn(Automorphism(p, mask));
    } while (std::next_permutation(p.begin(), p.end()));
}

}  // namespace hcube
