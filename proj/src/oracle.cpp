#include "kxor/oracle.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "kxor/errors.hpp"

namespace kxor::oracle {

EmpiricalTest EmpiricalTest::of_mean(std::span<const double> values, double expected) {
    EmpiricalTest t;
    t.samples = values.size();
    t.expected = expected;
    if (values.empty()) return t;
    const double n = static_cast<double>(values.size());
    t.statistic = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - t.statistic) * (v - t.statistic);
    const double variance = values.size() > 1 ? ss / (n - 1.0) : 0.0;
    t.sigma = std::sqrt(variance / n);
    t.pass = std::abs(t.statistic - expected) <= 3.0 * t.sigma + 1e-12;
    return t;
}

EmpiricalTest EmpiricalTest::of_proportion(std::uint64_t hits, std::uint64_t trials, double expected) {
    EmpiricalTest t;
    t.samples = trials;
    t.expected = expected;
    if (trials == 0) return t;
    t.statistic = double(hits) / double(trials);
    t.sigma = std::sqrt(expected * (1.0 - expected) / double(trials));
    t.pass = std::abs(t.statistic - expected) <= 3.0 * t.sigma + 1e-12;
    return t;
}

std::vector<Rational> exact_stationary_distribution(const MaterializedKikuchi& graph) {
    std::size_t total = 0;
    for (const auto& arcs : graph.adjacency) total += arcs.size();
    if (total == 0) throw InvalidInput("degree distribution of an edgeless graph is undefined");
    std::vector<Rational> pi;
    pi.reserve(graph.adjacency.size());
    for (const auto& arcs : graph.adjacency) pi.emplace_back(BigInt(arcs.size()), BigInt(total));
    return pi;
}

bool parity_cancels(const Hypergraph& graph, std::span<const EdgeIndex> edges) {
    std::vector<int> count(graph.n(), 0);
    for (EdgeIndex e : edges)
        for (Vertex v : graph.edges().at(e)) ++count[v];
    for (int c : count)
        if (c % 2 != 0) return false;
    return true;
}

ClosedWalkCheck exhaustive_closed_walk_oddcolors_check(const Hypergraph& graph, const MaterializedKikuchi& kikuchi,
                                                       std::size_t max_length, std::size_t per_start_cap) {
    if (max_length > 6) throw CapacityError("closed-walk enumeration is capped at length 6");
    constexpr std::size_t kExploreLimit = 50'000'000;

    ClosedWalkCheck check;
    std::size_t explored = 0;
    std::vector<std::size_t> path;
    std::vector<EdgeIndex> colors;

    for (std::size_t start = 0; start < kikuchi.vertices.size() && check.ok; ++start) {
        std::size_t closed_here = 0;
        path.assign(1, start);
        colors.clear();

        auto check_closed = [&] {
            if (++closed_here > per_start_cap) throw CapacityError("too many closed walks from one start");
            ++check.walks_checked;
            std::map<EdgeIndex, int> parity;
            for (EdgeIndex c : colors) parity[c] ^= 1;
            std::vector<EdgeIndex> odd;
            for (auto [c, p] : parity)
                if (p) odd.push_back(c);
            if (!odd.empty() && !parity_cancels(graph, odd)) {
                check.ok = false;
                check.counterexample_vertices = path;
                check.counterexample_colors = colors;
            }
        };

        // Iterative DFS; choice[d] is the next arc to try at depth d.
        std::vector<std::size_t> choice{0};
        while (!choice.empty() && check.ok) {
            const std::size_t depth = choice.size() - 1;
            const std::size_t at = path.back();
            if (depth == max_length || choice.back() >= kikuchi.adjacency[at].size()) {
                choice.pop_back();
                path.pop_back();
                if (!colors.empty()) colors.pop_back();
                if (!choice.empty()) ++choice.back();
                continue;
            }
            if (++explored > kExploreLimit) throw CapacityError("closed-walk enumeration explored too many walks");
            const auto& arc = kikuchi.adjacency[at][choice.back()];
            path.push_back(arc.to);
            colors.push_back(arc.color);
            choice.push_back(0);
            if (arc.to == start) check_closed();
        }
    }
    return check;
}

double chi_square_uniformity(std::span<const std::uint64_t> observed, std::span<const double> expected) {
    if (observed.size() != expected.size()) throw InvalidInput("observed and expected differ in length");
    if (observed.size() < 2) throw InvalidInput("chi-square needs at least two bins");
    double mass = 0.0;
    for (double p : expected) {
        if (!(p > 0.0)) throw InvalidInput("expected probabilities must be positive");
        mass += p;
    }
    const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
    if (total <= 0.0) throw InvalidInput("no observations");
    double statistic = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = total * expected[i] / mass;
        const double d = double(observed[i]) - e;
        statistic += d * d / e;
    }
    const double dof = double(observed.size() - 1);
    return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

double total_variation(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw InvalidInput("distributions differ in support size");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
    return 0.5 * sum;
}

double uniform_collision_probability(double outcomes, std::uint64_t draws) {
    double log_none = 0.0;
    for (std::uint64_t i = 1; i < draws; ++i) {
        const double keep = 1.0 - double(i) / outcomes;
        if (keep <= 0.0) return 1.0;
        log_none += std::log(keep);
    }
    return 1.0 - std::exp(log_none);
}

double binomial_lower_bound(std::uint64_t successes, std::uint64_t trials, double confidence) {
    if (trials == 0 || successes == 0) return 0.0;
    if (successes > trials) throw InvalidInput("more successes than trials");
    return boost::math::ibeta_inv(double(successes), double(trials - successes + 1), 1.0 - confidence);
}

std::vector<VertexList> all_subsets(std::uint32_t n, std::uint32_t r) {
    std::vector<VertexList> out;
    if (r > n) return out;
    VertexList current(r);
    std::iota(current.begin(), current.end(), Vertex{0});
    while (true) {
        out.push_back(current);
        std::int64_t i = std::int64_t(r) - 1;
        while (i >= 0 && current[i] == n - r + Vertex(i)) --i;
        if (i < 0) break;
        ++current[i];
        for (std::size_t j = std::size_t(i) + 1; j < r; ++j) current[j] = current[j - 1] + 1;
    }
    return out;
}

} // namespace kxor::oracle
