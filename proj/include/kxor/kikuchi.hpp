#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "kxor/bigmath.hpp"
#include "kxor/hypergraph.hpp"
#include "kxor/rng.hpp"

namespace kxor {

/// A level-ell Kikuchi vertex: an ell-subset of [0, n), stored as a bitset.
/// Ordering compares the packed words, which is a fixed total order and is
/// all the collision maps need.
class KikuchiVertex {
public:
    using Words = boost::container::small_vector<std::uint64_t, 2>;

    KikuchiVertex() = default;
    KikuchiVertex(std::uint32_t n, std::span<const Vertex> members);

    VertexList members() const;
    std::size_t size() const noexcept;
    const Words& words() const noexcept { return words_; }

    void toggle(std::span<const std::uint64_t> edge) noexcept {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= edge[i];
    }

    friend bool operator==(const KikuchiVertex&, const KikuchiVertex&) = default;
    friend std::strong_ordering operator<=>(const KikuchiVertex& a, const KikuchiVertex& b) noexcept {
        return std::lexicographical_compare_three_way(a.words_.begin(), a.words_.end(),
                                                      b.words_.begin(), b.words_.end());
    }

private:
    Words words_;
};

struct KikuchiParams {
    std::uint32_t ell = 0;
    BigInt vertex_count;     // N = C(n, ell)
    Rational average_degree; // C(n-k, ell-k/2) / C(n, ell) * C(k, k/2) * m
    double density = 0.0;    // Delta = C(k, k/2) m / n^{k/2}
    double asymptotic_degree = 0.0; // ell^{k/2} * Delta
    double ln_vertex_count = 0.0;

    double d_bar() const { return to_double(average_degree); }
    double log2_vertex_count() const;
    /// N^exponent, evaluated as exp(exponent * ln N).
    double vertex_count_pow(double exponent) const;
};

/// Throws InvalidInput unless k/2 <= ell <= n - k/2.
KikuchiParams compute_params(const Hypergraph& graph, std::uint32_t ell);
KikuchiParams compute_params(std::uint32_t n, std::uint32_t k, std::size_t m, std::uint32_t ell);

/// Implicit K_ell(H): every query scans the m hyperedges.
///
/// Holds a reference to the hypergraph, which must outlive it.
class KikuchiGraph {
public:
    KikuchiGraph(const Hypergraph& graph, std::uint32_t ell);

    const Hypergraph& hypergraph() const noexcept { return *graph_; }
    std::uint32_t ell() const noexcept { return ell_; }

    KikuchiVertex vertex(std::span<const Vertex> members) const;

    /// #{e : |e n w| = k/2}.
    std::size_t degree(const KikuchiVertex& w) const;

    /// Colors of the Kikuchi edges at w, in increasing edge order.
    void incident_colors(const KikuchiVertex& w, std::vector<EdgeIndex>& out) const;

    KikuchiVertex neighbor(const KikuchiVertex& w, EdgeIndex color) const;

    struct Step {
        KikuchiVertex to;
        EdgeIndex color;
    };

    /// Uniform incident edge of w. Throws NoNeighbor at an isolated vertex.
    Step sample_neighbor(const KikuchiVertex& w, RngStream& rng) const;

    /// Draw from pi(w) proportional to deg(w): a uniform hyperedge e, a
    /// uniform half e' of e, and a uniform (ell - k/2)-subset f of [n] \ e;
    /// returns e' u f. Throws NoEdge when m = 0.
    KikuchiVertex sample_stationary(RngStream& rng) const;

private:
    const Hypergraph* graph_;
    std::uint32_t ell_;
    std::uint32_t half_;
};

/// Explicit edge-colored K_ell(H), only for C(n, ell) <= 1e5.
struct MaterializedKikuchi {
    struct Arc {
        std::size_t to;
        EdgeIndex color;
    };

    std::uint32_t ell = 0;
    std::vector<VertexList> vertices;
    std::map<VertexList, std::size_t> index;
    std::vector<std::vector<Arc>> adjacency;
    std::size_t edge_count = 0;

    std::size_t degree(std::size_t v) const { return adjacency[v].size(); }
    Rational average_degree() const;
    std::string to_dot() const;
};

MaterializedKikuchi materialize_kikuchi(const Hypergraph& graph, std::uint32_t ell);

inline constexpr std::uint64_t kMaterializeLimit = 100000;

} // namespace kxor
