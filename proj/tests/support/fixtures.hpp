#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "kxor/hypergraph.hpp"
#include "kxor/instance.hpp"
#include "kxor/rng.hpp"

namespace kxor::testing {

// e0={1,2,3,4}, e1={1,2,5,6}, e2={3,4,5,6}: the three edges cancel.
inline Hypergraph gadget() { return Hypergraph(7, 4, {{1, 2, 3, 4}, {1, 2, 5, 6}, {3, 4, 5, 6}}); }

// Two vertex-disjoint copies of the gadget.
inline Hypergraph double_gadget() {
    return Hypergraph(14, 4, {{1, 2, 3, 4}, {1, 2, 5, 6}, {3, 4, 5, 6}, {8, 9, 10, 11}, {8, 9, 12, 13}, {10, 11, 12, 13}});
}

inline Hypergraph random_graph(std::uint32_t n, std::uint32_t k, std::size_t m, std::uint64_t seed) {
    RngStream rng(seed, 99);
    return sample_uniform_hypergraph(n, k, m, rng);
}

// Pascal's triangle in 64-bit integers, for small arguments only.
inline std::uint64_t pascal(std::uint32_t n, std::uint32_t r) {
    if (r > n) return 0;
    std::vector<std::uint64_t> row{1};
    for (std::uint32_t i = 1; i <= n; ++i) {
        std::vector<std::uint64_t> next(i + 1, 1);
        for (std::uint32_t j = 1; j < i; ++j) next[j] = row[j - 1] + row[j];
        row = std::move(next);
    }
    return row[r];
}

// Vertex multiset counting with std::set, sharing nothing with the library.
inline bool covers_evenly(const Hypergraph& graph, const std::vector<EdgeIndex>& edges) {
    if (edges.empty()) return false;
    std::set<Vertex> odd;
    for (EdgeIndex e : edges)
        for (Vertex v : graph.edge(e))
            if (!odd.insert(v).second) odd.erase(v);
    return odd.empty();
}

inline std::size_t intersection_size(const VertexList& a, const VertexList& b) {
    std::set<Vertex> sa(a.begin(), a.end());
    std::size_t count = 0;
    for (Vertex v : b) count += sa.count(v);
    return count;
}

} // namespace kxor::testing
