#pragma once

// Brute-force oracles and statistical gates for the test suites. Nothing in
// here reuses the fast-path set or linear-algebra helpers.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kxor/bigmath.hpp"
#include "kxor/hypergraph.hpp"
#include "kxor/kikuchi.hpp"
#include "kxor/rng.hpp"

namespace kxor::oracle {

/// A Monte-Carlo estimate compared against its expectation at 3 sigma.
struct EmpiricalTest {
    std::size_t samples = 0;
    double statistic = 0.0;
    double expected = 0.0;
    double sigma = 0.0;
    bool pass = false;

    /// Sample mean of `values`, sigma = sample stddev / sqrt(count).
    static EmpiricalTest of_mean(std::span<const double> values, double expected);
    /// Proportion of `hits` among `trials`, binomial sigma at `expected`.
    static EmpiricalTest of_proportion(std::uint64_t hits, std::uint64_t trials, double expected);
};

/// pi(v) = deg(v) / 2|E|, exactly. Throws InvalidInput on an edgeless graph.
std::vector<Rational> exact_stationary_distribution(const MaterializedKikuchi& graph);

struct ClosedWalkCheck {
    bool ok = true;
    std::size_t walks_checked = 0;
    std::vector<std::size_t> counterexample_vertices;
    std::vector<EdgeIndex> counterexample_colors;
};

/// Enumerates every closed walk of length 1..max_length from every vertex
/// and checks that its odd colors form an even cover (or are empty). Throws
/// CapacityError when max_length > 6 or a start has more than
/// `per_start_cap` closed walks.
ClosedWalkCheck exhaustive_closed_walk_oddcolors_check(const Hypergraph& graph,
                                                       const MaterializedKikuchi& kikuchi,
                                                       std::size_t max_length,
                                                       std::size_t per_start_cap = 1000);

/// Pearson chi-square p-value of `observed` counts against probabilities
/// `expected`. Throws InvalidInput on a non-positive expected probability
/// or fewer than two bins.
double chi_square_uniformity(std::span<const std::uint64_t> observed, std::span<const double> expected);

double total_variation(std::span<const double> p, std::span<const double> q);

/// Vertex-parity check written independently of verify_even_cover.
bool parity_cancels(const Hypergraph& graph, std::span<const EdgeIndex> edges);

/// Probability of at least one collision among `draws` uniform draws from
/// `outcomes` values.
double uniform_collision_probability(double outcomes, std::uint64_t draws);

/// One-sided Clopper-Pearson lower confidence bound on a binomial rate.
double binomial_lower_bound(std::uint64_t successes, std::uint64_t trials, double confidence);

/// All r-subsets of [0, n) in lexicographic order.
std::vector<VertexList> all_subsets(std::uint32_t n, std::uint32_t r);

/// pi-mass of vertices with deg(v) < beta * average degree, exactly.
Rational low_degree_mass(const MaterializedKikuchi& graph, const Rational& beta);

struct SuiteOptions {
    std::size_t stationary_samples = 100000;
    double tv_tolerance = 0.05;
    std::size_t max_walk_length = 4;
    std::size_t per_start_cap = 1000;
};

struct SuiteCheck {
    std::string name;
    bool pass = false;
    bool skipped = false;
    std::string detail;
};

/// Implicit-versus-materialized checks on one instance: degrees, neighbor
/// sets, the average-degree formula, the stationary sampler, closed-walk
/// odd colors and the low-degree mass bound.
std::vector<SuiteCheck> run_oracle_suite(const Hypergraph& graph, std::uint32_t ell, const SuiteOptions& options,
                                         const RngStream& rng);

} // namespace kxor::oracle
