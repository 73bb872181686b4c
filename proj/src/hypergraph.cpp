#include "kxor/hypergraph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "kxor/errors.hpp"

namespace kxor {

namespace {

std::size_t words_for(std::uint32_t n) {
    return std::max<std::size_t>(1, (std::size_t{n} + 63) / 64);
}

} // namespace

bool is_strictly_increasing(std::span<const std::uint32_t> values) {
    return std::adjacent_find(values.begin(), values.end(), std::greater_equal<>{}) == values.end();
}

Hypergraph::Hypergraph(std::uint32_t n, std::uint32_t k, std::vector<VertexList> edges)
    : n_(n), k_(k), edges_(std::move(edges)), words_(words_for(n)) {
    if (n == 0) throw InvalidInput("hypergraph needs at least one vertex");
    if (k < 2 || k % 2 != 0) throw InvalidInput("arity k must be an even integer >= 2");
    if (k > n) throw InvalidInput("arity k exceeds the vertex count");

    std::set<VertexList> seen;
    packed_.assign(edges_.size() * words_, 0);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        auto& edge = edges_[e];
        std::sort(edge.begin(), edge.end());
        if (edge.size() != k)
            throw InvalidInput("edge " + std::to_string(e) + " does not have exactly k vertices");
        if (!is_strictly_increasing(edge))
            throw InvalidInput("edge " + std::to_string(e) + " repeats a vertex");
        if (edge.back() >= n)
            throw InvalidInput("edge " + std::to_string(e) + " has a vertex >= n");
        if (!seen.insert(edge).second)
            throw InvalidInput("edge " + std::to_string(e) + " is a duplicate");
        for (Vertex v : edge) packed_[e * words_ + v / 64] |= std::uint64_t{1} << (v % 64);
    }
}

bool Hypergraph::is_canonical() const {
    return std::is_sorted(edges_.begin(), edges_.end());
}

CanonicalForm canonicalize(std::uint32_t n, std::uint32_t k, std::vector<VertexList> edges) {
    bool canonical = true;
    for (auto& edge : edges) {
        if (!std::is_sorted(edge.begin(), edge.end())) {
            canonical = false;
            std::sort(edge.begin(), edge.end());
        }
    }
    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });
    if (!std::is_sorted(edges.begin(), edges.end())) canonical = false;

    std::vector<VertexList> sorted;
    sorted.reserve(edges.size());
    for (std::size_t i : order) sorted.push_back(std::move(edges[i]));
    return {Hypergraph(n, k, std::move(sorted)), std::move(order), canonical};
}

VertexList symmetric_difference(std::span<const Vertex> a, std::span<const Vertex> b) {
    VertexList out;
    out.reserve(a.size() + b.size());
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool verify_even_cover(const Hypergraph& graph, std::span<const EdgeIndex> candidate) {
    std::vector<bool> used(graph.m(), false);
    for (EdgeIndex e : candidate) {
        if (e >= graph.m()) throw InvalidInput("edge index " + std::to_string(e) + " out of range");
        if (used[e]) throw InvalidInput("edge index " + std::to_string(e) + " repeated");
        used[e] = true;
    }
    if (candidate.empty()) return false;

    std::vector<std::uint64_t> parity(graph.words(), 0);
    for (EdgeIndex e : candidate) {
        auto packed = graph.packed_edge(e);
        for (std::size_t w = 0; w < parity.size(); ++w) parity[w] ^= packed[w];
    }
    return std::all_of(parity.begin(), parity.end(), [](std::uint64_t w) { return w == 0; });
}

} // namespace kxor
