#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace kxor {

using Vertex = std::uint32_t;
using EdgeIndex = std::uint32_t;

/// Strictly increasing list of vertex indices.
using VertexList = std::vector<Vertex>;

/// Strictly increasing list of indices into Hypergraph::edges().
using EdgeSet = std::vector<EdgeIndex>;

/// An EdgeSet whose hyperedges cancel under symmetric difference.
using EvenCover = EdgeSet;

/// A k-uniform hypergraph on vertices [0, n) with k even.
///
/// Edges keep the order they were given in; each edge is sorted on
/// construction. Duplicate edges are rejected. A bit-packed copy of every
/// edge is kept for the Kikuchi queries, which intersect vertex sets many
/// millions of times.
class Hypergraph {
public:
    Hypergraph(std::uint32_t n, std::uint32_t k, std::vector<VertexList> edges);

    std::uint32_t n() const noexcept { return n_; }
    std::uint32_t k() const noexcept { return k_; }
    std::size_t m() const noexcept { return edges_.size(); }

    const std::vector<VertexList>& edges() const noexcept { return edges_; }
    const VertexList& edge(EdgeIndex e) const { return edges_.at(e); }

    /// True when the edge list is lexicographically sorted.
    bool is_canonical() const;

    /// Number of 64-bit words per packed vertex set.
    std::size_t words() const noexcept { return words_; }
    std::span<const std::uint64_t> packed_edge(EdgeIndex e) const noexcept {
        return {packed_.data() + std::size_t{e} * words_, words_};
    }

    friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

private:
    std::uint32_t n_;
    std::uint32_t k_;
    std::vector<VertexList> edges_;
    std::size_t words_;
    std::vector<std::uint64_t> packed_;
};

/// Result of normalizing an edge list: `order[i]` is the input position of
/// canonical edge i.
struct CanonicalForm {
    Hypergraph graph;
    std::vector<std::size_t> order;
    bool was_canonical;
};

/// Sorts each edge and then the edge list. Throws InvalidInput on any
/// malformed or duplicate edge.
CanonicalForm canonicalize(std::uint32_t n, std::uint32_t k, std::vector<VertexList> edges);

/// a XOR b for strictly sorted inputs, linear in |a| + |b|.
VertexList symmetric_difference(std::span<const Vertex> a, std::span<const Vertex> b);

bool is_strictly_increasing(std::span<const std::uint32_t> values);

/// True iff `candidate` is nonempty and every vertex lies in an even number
/// of the referenced hyperedges. Throws InvalidInput on out-of-range or
/// repeated indices.
bool verify_even_cover(const Hypergraph& graph, std::span<const EdgeIndex> candidate);

} // namespace kxor
