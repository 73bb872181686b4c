#include "kxor/kikuchi.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "kxor/errors.hpp"

namespace kxor {

KikuchiVertex::KikuchiVertex(std::uint32_t n, std::span<const Vertex> members)
    : words_(std::max<std::size_t>(1, (std::size_t{n} + 63) / 64), 0) {
    for (Vertex v : members) {
        if (v >= n) throw InvalidInput("Kikuchi vertex member out of range");
        auto& word = words_[v / 64];
        const std::uint64_t bit = std::uint64_t{1} << (v % 64);
        if (word & bit) throw InvalidInput("Kikuchi vertex repeats a member");
        word |= bit;
    }
}

VertexList KikuchiVertex::members() const {
    VertexList out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t bits = words_[w];
        while (bits) {
            out.push_back(static_cast<Vertex>(w * 64 + std::countr_zero(bits)));
            bits &= bits - 1;
        }
    }
    return out;
}

std::size_t KikuchiVertex::size() const noexcept {
    std::size_t total = 0;
    for (auto w : words_) total += std::popcount(w);
    return total;
}

double KikuchiParams::log2_vertex_count() const {
    return ln_vertex_count / std::numbers::ln2;
}

double KikuchiParams::vertex_count_pow(double exponent) const {
    return std::exp(exponent * ln_vertex_count);
}

KikuchiParams compute_params(std::uint32_t n, std::uint32_t k, std::size_t m, std::uint32_t ell) {
    const std::uint32_t half = k / 2;
    if (ell < half || ell + half > n) throw InvalidInput("ell must satisfy k/2 <= ell <= n - k/2");

    KikuchiParams p;
    p.ell = ell;
    p.vertex_count = binomial(n, ell);
    p.average_degree = Rational(binomial(n - k, ell - half) * binomial(k, half) * m, p.vertex_count);
    p.density = static_cast<double>(binomial(k, half)) * static_cast<double>(m) / std::pow(double(n), half);
    p.asymptotic_degree = std::pow(double(ell), half) * p.density;
    p.ln_vertex_count = ln(p.vertex_count);
    return p;
}

KikuchiParams compute_params(const Hypergraph& graph, std::uint32_t ell) {
    return compute_params(graph.n(), graph.k(), graph.m(), ell);
}

KikuchiGraph::KikuchiGraph(const Hypergraph& graph, std::uint32_t ell)
    : graph_(&graph), ell_(ell), half_(graph.k() / 2) {
    if (ell < half_ || ell + half_ > graph.n()) throw InvalidInput("ell must satisfy k/2 <= ell <= n - k/2");
}

KikuchiVertex KikuchiGraph::vertex(std::span<const Vertex> members) const {
    if (members.size() != ell_) throw InvalidInput("Kikuchi vertex must have exactly ell members");
    return KikuchiVertex(graph_->n(), members);
}

std::size_t KikuchiGraph::degree(const KikuchiVertex& w) const {
    const auto& words = w.words();
    const std::size_t m = graph_->m();
    std::size_t count = 0;
    if (words.size() == 1) {
        const std::uint64_t bits = words[0];
        for (std::size_t e = 0; e < m; ++e)
            count += std::popcount(bits & graph_->packed_edge(static_cast<EdgeIndex>(e))[0]) == int(half_);
        return count;
    }
    for (std::size_t e = 0; e < m; ++e) {
        auto edge = graph_->packed_edge(static_cast<EdgeIndex>(e));
        std::uint32_t shared = 0;
        for (std::size_t i = 0; i < words.size(); ++i) shared += std::popcount(words[i] & edge[i]);
        count += shared == half_;
    }
    return count;
}

void KikuchiGraph::incident_colors(const KikuchiVertex& w, std::vector<EdgeIndex>& out) const {
    out.clear();
    const auto& words = w.words();
    const std::size_t m = graph_->m();
    if (words.size() == 1) {
        const std::uint64_t bits = words[0];
        for (std::size_t e = 0; e < m; ++e)
            if (std::popcount(bits & graph_->packed_edge(static_cast<EdgeIndex>(e))[0]) == int(half_))
                out.push_back(static_cast<EdgeIndex>(e));
        return;
    }
    for (std::size_t e = 0; e < m; ++e) {
        auto edge = graph_->packed_edge(static_cast<EdgeIndex>(e));
        std::uint32_t shared = 0;
        for (std::size_t i = 0; i < words.size(); ++i) shared += std::popcount(words[i] & edge[i]);
        if (shared == half_) out.push_back(static_cast<EdgeIndex>(e));
    }
}

KikuchiVertex KikuchiGraph::neighbor(const KikuchiVertex& w, EdgeIndex color) const {
    KikuchiVertex next = w;
    next.toggle(graph_->packed_edge(color));
    return next;
}

KikuchiGraph::Step KikuchiGraph::sample_neighbor(const KikuchiVertex& w, RngStream& rng) const {
    thread_local std::vector<EdgeIndex> incident;
    incident_colors(w, incident);
    if (incident.empty()) throw NoNeighbor("Kikuchi vertex has no neighbors");
    const EdgeIndex color = incident[rng.below(incident.size())];
    return {neighbor(w, color), color};
}

KikuchiVertex KikuchiGraph::sample_stationary(RngStream& rng) const {
    const std::size_t m = graph_->m();
    if (m == 0) throw NoEdge("stationary sampling needs at least one hyperedge");
    const auto& edge = graph_->edge(static_cast<EdgeIndex>(rng.below(m)));

    VertexList members;
    members.reserve(ell_);
    std::sample(edge.begin(), edge.end(), std::back_inserter(members), half_, rng);

    thread_local VertexList outside;
    outside.clear();
    for (Vertex v = 0, j = 0; v < graph_->n(); ++v) {
        if (j < edge.size() && edge[j] == v) {
            ++j;
            continue;
        }
        outside.push_back(v);
    }
    std::sample(outside.begin(), outside.end(), std::back_inserter(members), ell_ - half_, rng);
    return KikuchiVertex(graph_->n(), members);
}

Rational MaterializedKikuchi::average_degree() const {
    if (vertices.empty()) return Rational(0);
    return Rational(BigInt(2 * edge_count), BigInt(vertices.size()));
}

std::string MaterializedKikuchi::to_dot() const {
    auto label = [&](std::size_t v) {
        std::string s;
        for (Vertex x : vertices[v]) s += (s.empty() ? "" : ",") + std::to_string(x);
        return "\"" + s + "\"";
    };
    std::ostringstream out;
    out << "graph kikuchi_" << ell << " {\n";
    for (std::size_t v = 0; v < vertices.size(); ++v) {
        if (adjacency[v].empty()) out << "  " << label(v) << ";\n";
        for (const auto& arc : adjacency[v])
            if (v < arc.to) out << "  " << label(v) << " -- " << label(arc.to) << " [label=" << arc.color << "];\n";
    }
    out << "}\n";
    return out.str();
}

MaterializedKikuchi materialize_kikuchi(const Hypergraph& graph, std::uint32_t ell) {
    const std::uint32_t n = graph.n();
    const std::uint32_t half = graph.k() / 2;
    if (ell < half || ell + half > n) throw InvalidInput("ell must satisfy k/2 <= ell <= n - k/2");
    if (binomial(n, ell) > kMaterializeLimit) throw CapacityError("C(n, ell) exceeds the materialization limit");

    MaterializedKikuchi out;
    out.ell = ell;

    // Lexicographic ell-subsets.
    VertexList current(ell);
    std::iota(current.begin(), current.end(), Vertex{0});
    while (true) {
        out.index.emplace(current, out.vertices.size());
        out.vertices.push_back(current);
        std::int64_t i = std::int64_t{ell} - 1;
        while (i >= 0 && current[i] == n - ell + i) --i;
        if (i < 0) break;
        ++current[i];
        for (std::size_t j = i + 1; j < ell; ++j) current[j] = current[j - 1] + 1;
    }

    out.adjacency.resize(out.vertices.size());
    std::size_t arcs = 0;
    VertexList diff;
    for (std::size_t v = 0; v < out.vertices.size(); ++v) {
        const auto& w = out.vertices[v];
        for (std::size_t e = 0; e < graph.m(); ++e) {
            const auto& edge = graph.edge(static_cast<EdgeIndex>(e));
            diff.clear();
            std::set_symmetric_difference(w.begin(), w.end(), edge.begin(), edge.end(), std::back_inserter(diff));
            if (diff.size() != ell) continue;
            out.adjacency[v].push_back({out.index.at(diff), static_cast<EdgeIndex>(e)});
            ++arcs;
        }
    }
    out.edge_count = arcs / 2;
    return out;
}

} // namespace kxor
