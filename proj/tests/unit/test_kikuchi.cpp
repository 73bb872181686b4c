#include <doctest.h>

#include <map>
#include <set>

#include "kxor/errors.hpp"
#include "kxor/kikuchi.hpp"
#include "kxor/oracle.hpp"
#include "kxor/walk.hpp"
#include "support/fixtures.hpp"

using namespace kxor;
using kxor::testing::intersection_size;
using kxor::testing::pascal;

namespace {

// Degree straight from the definition: count edges meeting w in k/2 vertices.
std::size_t reference_degree(const Hypergraph& g, const VertexList& w) {
    std::size_t d = 0;
    for (const auto& e : g.edges()) d += intersection_size(e, w) == g.k() / 2;
    return d;
}

std::vector<double> empirical(const std::map<VertexList, std::size_t>& index, const std::vector<VertexList>& draws) {
    std::vector<double> freq(index.size(), 0.0);
    for (const auto& w : draws) freq[index.at(w)] += 1.0 / static_cast<double>(draws.size());
    return freq;
}

std::vector<double> exact_pi(const MaterializedKikuchi& m) {
    std::vector<double> out;
    for (const auto& p : oracle::exact_stationary_distribution(m)) out.push_back(to_double(p));
    return out;
}

} // namespace

TEST_CASE("params for n=6, k=4, ell=2, m=5 match the materialized graph") {
    const Hypergraph g(6, 4, {{0, 1, 2, 3}, {0, 1, 2, 4}, {0, 1, 4, 5}, {1, 2, 3, 5}, {2, 3, 4, 5}});
    const auto p = compute_params(g, 2);
    CHECK(p.vertex_count == 15);
    CHECK(p.average_degree == Rational(2));
    CHECK(p.d_bar() == doctest::Approx(2.0));
    const auto m = materialize_kikuchi(g, 2);
    CHECK(m.vertices.size() == 15);
    CHECK(m.average_degree() == Rational(2));
}

TEST_CASE("param formula specializations") {
    // ell = k/2: C(k,k/2) m / C(n,k/2).
    const auto p = compute_params(10, 4, 17, 2);
    CHECK(p.average_degree == Rational(6 * 17, static_cast<long long>(pascal(10, 2))));
    CHECK(compute_params(10, 4, 0, 3).average_degree == 0);
    CHECK(compute_params(10, 4, 17, 3).vertex_count == pascal(10, 3));
    CHECK(p.density == doctest::Approx(6.0 * 17 / 100.0));
    CHECK_THROWS_AS(compute_params(10, 4, 17, 1), InvalidInput);
    CHECK_THROWS_AS(compute_params(10, 4, 17, 9), InvalidInput);
    CHECK(compute_params(200, 6, 1000, 40).ln_vertex_count == doctest::Approx(ln(binomial(200, 40))));
}

TEST_CASE("degree examples") {
    const Hypergraph g(5, 4, {{0, 1, 2, 3}});
    const KikuchiGraph k(g, 2);
    CHECK(k.degree(k.vertex(VertexList{0, 1})) == 1);
    CHECK(k.neighbor(k.vertex(VertexList{0, 1}), 0).members() == VertexList{2, 3});
    CHECK(k.degree(k.vertex(VertexList{0, 4})) == 0);
    const Hypergraph far(10, 4, {{0, 1, 2, 3}, {0, 1, 4, 5}});
    CHECK(KikuchiGraph(far, 3).degree(KikuchiGraph(far, 3).vertex(VertexList{7, 8, 9})) == 0);
}

TEST_CASE("implicit degree equals the definition on random vertices") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const auto g = kxor::testing::random_graph(70, seed % 2 ? 4 : 6, 300, seed);
        const KikuchiGraph k(g, 5);
        RngStream rng(seed);
        for (int i = 0; i < 200; ++i) {
            VertexList w;
            std::set<Vertex> chosen;
            while (chosen.size() < 5) chosen.insert(static_cast<Vertex>(rng.below(70)));
            w.assign(chosen.begin(), chosen.end());
            CHECK(k.degree(k.vertex(w)) == reference_degree(g, w));
        }
    }
}

TEST_CASE("materialized K_2 of a single 4-edge") {
    const Hypergraph g(5, 4, {{0, 1, 2, 3}});
    const auto m = materialize_kikuchi(g, 2);
    CHECK(m.vertices.size() == 10);
    CHECK(m.edge_count == 3);
    std::set<std::pair<VertexList, VertexList>> edges;
    for (std::size_t v = 0; v < m.vertices.size(); ++v)
        for (const auto& arc : m.adjacency[v])
            if (m.vertices[v] < m.vertices[arc.to]) edges.emplace(m.vertices[v], m.vertices[arc.to]);
    CHECK(edges == std::set<std::pair<VertexList, VertexList>>{
                       {{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}, {{0, 3}, {1, 2}}});
    CHECK_THROWS_AS(materialize_kikuchi(kxor::testing::random_graph(40, 4, 10, 1), 5), CapacityError);
}

TEST_CASE("materialized graphs: handshake, coloring, exact average degree") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const std::uint32_t k = seed % 2 ? 4 : 6;
        const std::uint32_t ell = k / 2 + static_cast<std::uint32_t>(seed % 2);
        const auto g = kxor::testing::random_graph(11, k, 40, seed);
        const auto m = materialize_kikuchi(g, ell);
        std::size_t degree_sum = 0;
        for (std::size_t v = 0; v < m.vertices.size(); ++v) {
            degree_sum += m.degree(v);
            std::set<EdgeIndex> colors;
            for (const auto& arc : m.adjacency[v]) {
                CHECK(colors.insert(arc.color).second);
                CHECK(symmetric_difference(m.vertices[v], m.vertices[arc.to]) == g.edge(arc.color));
            }
        }
        CHECK(degree_sum == 2 * m.edge_count);
        CHECK(m.average_degree() == compute_params(g, ell).average_degree);
    }
}

TEST_CASE("sample_neighbor is uniform over incident edges") {
    const auto g = kxor::testing::random_graph(12, 4, 200, 4);
    const KikuchiGraph k(g, 3);
    const auto w = k.vertex(VertexList{0, 1, 2});
    std::vector<EdgeIndex> incident;
    k.incident_colors(w, incident);
    REQUIRE(incident.size() >= 3);
    std::map<EdgeIndex, std::uint64_t> counts;
    RngStream rng(5);
    const std::uint64_t draws = 100000;
    for (std::uint64_t i = 0; i < draws; ++i) {
        const auto step = k.sample_neighbor(w, rng);
        ++counts[step.color];
        if (i < 1000) {
            KikuchiVertex back = step.to;
            back.toggle(g.packed_edge(step.color));
            CHECK(back == w);
        }
    }
    CHECK(counts.size() == incident.size());
    for (auto [color, c] : counts)
        CHECK(oracle::EmpiricalTest::of_proportion(c, draws, 1.0 / static_cast<double>(incident.size())).pass);
}

TEST_CASE("degree-one and isolated vertices") {
    const Hypergraph g(5, 4, {{0, 1, 2, 3}});
    const KikuchiGraph k(g, 2);
    RngStream rng(1);
    for (int i = 0; i < 20; ++i) CHECK(k.sample_neighbor(k.vertex(VertexList{0, 2}), rng).to.members() == VertexList{1, 3});
    CHECK_THROWS_AS(k.sample_neighbor(k.vertex(VertexList{0, 4}), rng), NoNeighbor);
    CHECK_THROWS_AS(KikuchiGraph(Hypergraph(5, 4, {}), 2).sample_stationary(rng), NoEdge);
}

TEST_CASE("stationary sampler outputs valid vertices") {
    const auto g = kxor::testing::random_graph(30, 6, 50, 2);
    const KikuchiGraph k(g, 5);
    RngStream rng(3);
    for (int i = 0; i < 2000; ++i) {
        const auto w = k.sample_stationary(rng).members();
        CHECK(w.size() == 5);
        CHECK(k.degree(k.vertex(w)) >= 1);
    }
    // ell = k/2: always a half of some edge.
    const KikuchiGraph half(g, 3);
    for (int i = 0; i < 500; ++i) {
        const auto w = half.sample_stationary(rng).members();
        bool is_half = false;
        for (const auto& e : g.edges()) is_half = is_half || intersection_size(e, w) == 3;
        CHECK(is_half);
    }
}

TEST_CASE("stationary sampler matches pi on n=6, k=4, ell=2, m=3") {
    const Hypergraph g(6, 4, {{0, 1, 2, 3}, {0, 1, 4, 5}, {1, 2, 3, 5}});
    const KikuchiGraph k(g, 2);
    const auto m = materialize_kikuchi(g, 2);
    RngStream rng(8);
    std::vector<VertexList> draws;
    for (int i = 0; i < 100000; ++i) draws.push_back(k.sample_stationary(rng).members());
    CHECK(oracle::total_variation(empirical(m.index, draws), exact_pi(m)) <= 0.05);
}

TEST_CASE("walk marginals stay at pi after 1 and 5 steps") {
    const Hypergraph g(7, 4, {{0, 1, 2, 3}, {0, 1, 4, 5}, {1, 2, 3, 5}, {2, 4, 5, 6}, {0, 3, 5, 6}});
    const KikuchiGraph k(g, 2);
    const auto m = materialize_kikuchi(g, 2);
    const auto pi = exact_pi(m);
    for (std::size_t t : {1, 5}) {
        std::vector<VertexList> ends;
        for (std::uint64_t i = 0; i < 100000; ++i) {
            RngStream rng(i, 50 + t);
            const auto start = k.sample_stationary(rng);
            ends.push_back(run_walk(k, start, t, rng).end().members());
        }
        CHECK_MESSAGE(oracle::total_variation(empirical(m.index, ends), pi) <= 0.05, "t=" << t);
    }
}

TEST_CASE("low-degree pi mass stays below beta") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const auto g = kxor::testing::random_graph(10, 4, 25 + 5 * seed, seed);
        const auto m = materialize_kikuchi(g, 3);
        for (const Rational& beta : {Rational(1, 20), Rational(1, 2), Rational(1)})
            CHECK(oracle::low_degree_mass(m, beta) < beta);
    }
}

TEST_CASE("dot export lists every edge once") {
    const auto m = materialize_kikuchi(Hypergraph(5, 4, {{0, 1, 2, 3}}), 2);
    const auto dot = m.to_dot();
    std::size_t edges = 0;
    for (std::size_t pos = dot.find("--"); pos != std::string::npos; pos = dot.find("--", pos + 2)) ++edges;
    CHECK(edges == 3);
}
