#include <algorithm>
#include <sstream>

#include "kxor/errors.hpp"
#include "kxor/oracle.hpp"

namespace kxor::oracle {

Rational low_degree_mass(const MaterializedKikuchi& graph, const Rational& beta) {
    const auto pi = exact_stationary_distribution(graph);
    const Rational cutoff = beta * graph.average_degree();
    Rational mass = 0;
    for (std::size_t v = 0; v < graph.vertices.size(); ++v)
        if (Rational(graph.degree(v)) < cutoff) mass += pi[v];
    return mass;
}

namespace {

SuiteCheck check_degrees_and_neighbors(const KikuchiGraph& implicit, const MaterializedKikuchi& explicit_graph,
                                       SuiteCheck& neighbors) {
    SuiteCheck degrees{"degree", true, false, {}};
    neighbors = {"neighbors", true, false, {}};
    std::vector<EdgeIndex> colors;
    for (std::size_t v = 0; v < explicit_graph.vertices.size(); ++v) {
        const auto w = implicit.vertex(explicit_graph.vertices[v]);
        if (implicit.degree(w) != explicit_graph.degree(v)) {
            degrees.pass = false;
            degrees.detail = "mismatch at vertex " + std::to_string(v);
        }
        implicit.incident_colors(w, colors);
        std::vector<EdgeIndex> expected;
        for (const auto& arc : explicit_graph.adjacency[v]) expected.push_back(arc.color);
        std::sort(expected.begin(), expected.end());
        if (colors != expected) {
            neighbors.pass = false;
            neighbors.detail = "color set mismatch at vertex " + std::to_string(v);
            continue;
        }
        for (const auto& arc : explicit_graph.adjacency[v]) {
            if (implicit.neighbor(w, arc.color).members() != explicit_graph.vertices[arc.to]) {
                neighbors.pass = false;
                neighbors.detail = "neighbor mismatch at vertex " + std::to_string(v);
            }
        }
    }
    std::ostringstream note;
    note << explicit_graph.vertices.size() << " vertices";
    if (degrees.detail.empty()) degrees.detail = note.str();
    if (neighbors.detail.empty()) neighbors.detail = note.str() + ", " + std::to_string(2 * explicit_graph.edge_count) + " arcs";
    return degrees;
}

} // namespace

std::vector<SuiteCheck> run_oracle_suite(const Hypergraph& graph, std::uint32_t ell, const SuiteOptions& options,
                                         const RngStream& rng) {
    const KikuchiGraph implicit(graph, ell);
    const MaterializedKikuchi explicit_graph = materialize_kikuchi(graph, ell);
    const KikuchiParams params = compute_params(graph, ell);
    std::vector<SuiteCheck> out;

    SuiteCheck neighbors;
    out.push_back(check_degrees_and_neighbors(implicit, explicit_graph, neighbors));
    out.push_back(neighbors);

    {
        SuiteCheck c{"average_degree", params.average_degree == explicit_graph.average_degree(), false, {}};
        std::ostringstream note;
        note << "formula " << params.average_degree << ", materialized " << explicit_graph.average_degree();
        c.detail = note.str();
        out.push_back(c);
    }

    if (explicit_graph.edge_count == 0) {
        out.push_back({"stationary_tv", true, true, "edgeless graph"});
        out.push_back({"closed_walks", true, true, "edgeless graph"});
        out.push_back({"min_degree", true, true, "edgeless graph"});
        return out;
    }

    const auto pi = exact_stationary_distribution(explicit_graph);
    {
        std::vector<double> empirical(pi.size(), 0.0), exact(pi.size());
        for (std::size_t v = 0; v < pi.size(); ++v) exact[v] = to_double(pi[v]);
        RngStream sampler = rng.fork(0);
        for (std::size_t s = 0; s < options.stationary_samples; ++s)
            empirical[explicit_graph.index.at(implicit.sample_stationary(sampler).members())] += 1.0;
        for (double& x : empirical) x /= static_cast<double>(options.stationary_samples);
        const double tv = total_variation(empirical, exact);
        out.push_back({"stationary_tv", tv <= options.tv_tolerance, false,
                       "TV " + std::to_string(tv) + " at " + std::to_string(options.stationary_samples) + " samples"});
    }

    try {
        const auto check =
            exhaustive_closed_walk_oddcolors_check(graph, explicit_graph, options.max_walk_length, options.per_start_cap);
        out.push_back({"closed_walks", check.ok, false,
                       std::to_string(check.walks_checked) + " closed walks up to length " +
                           std::to_string(options.max_walk_length)});
    } catch (const CapacityError& e) {
        out.push_back({"closed_walks", true, true, e.what()});
    }

    {
        SuiteCheck c{"min_degree", true, false, {}};
        std::ostringstream note;
        for (const Rational& beta : {Rational(1, 20), Rational(1, 2), Rational(1)}) {
            const Rational mass = low_degree_mass(explicit_graph, beta);
            if (!(mass < beta)) c.pass = false;
            note << "beta " << beta << ": " << to_double(mass) << "; ";
        }
        c.detail = note.str();
        out.push_back(c);
    }
    return out;
}

} // namespace kxor::oracle
