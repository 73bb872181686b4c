#include "kxor/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "kxor/errors.hpp"

namespace kxor {

namespace {

std::uint64_t saturating_ceil(double x) {
    if (!(x < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(std::ceil(x));
}

} // namespace

const char* to_string(Profile profile) noexcept {
    return profile == Profile::Paper ? "paper" : "desk";
}

std::vector<EdgeIndex> ColoredWalk::colors() const {
    std::vector<EdgeIndex> out;
    out.reserve(steps.size());
    for (const auto& step : steps) out.push_back(step.color);
    return out;
}

ColoredWalk run_walk(const KikuchiGraph& graph, const KikuchiVertex& start, std::size_t T, RngStream& rng) {
    ColoredWalk walk;
    walk.start = start;
    walk.steps.reserve(T);
    walk.degrees.reserve(T);

    std::vector<EdgeIndex> incident;
    KikuchiVertex current = start;
    for (std::size_t t = 0; t < T; ++t) {
        graph.incident_colors(current, incident);
        if (incident.empty()) {
            walk.aborted = true;
            break;
        }
        walk.degrees.push_back(incident.size());
        const EdgeIndex color = incident[rng.below(incident.size())];
        current.toggle(graph.hypergraph().packed_edge(color));
        walk.steps.push_back({color, current});
    }
    return walk;
}

ColoredWalk reversed(const ColoredWalk& walk) {
    ColoredWalk out;
    out.start = walk.end();
    out.aborted = walk.aborted;
    out.steps.reserve(walk.length());
    for (std::size_t i = walk.length(); i-- > 0;) out.steps.push_back({walk.steps[i].color, walk.vertex(i)});
    return out;
}

ColoredWalk concatenate(const ColoredWalk& first, const ColoredWalk& second) {
    if (!(first.end() == second.start)) throw InvalidInput("walks do not meet");
    ColoredWalk out = first;
    out.steps.insert(out.steps.end(), second.steps.begin(), second.steps.end());
    out.aborted = first.aborted || second.aborted;
    const bool annotated = first.degrees.size() == first.length() && second.degrees.size() == second.length();
    if (annotated)
        out.degrees.insert(out.degrees.end(), second.degrees.begin(), second.degrees.end());
    else
        out.degrees.clear();
    return out;
}

GoodnessReport assess_goodness(const ColoredWalk& walk, double beta, double d_bar) {
    if (walk.aborted) return {walk.degrees.size(), false};
    const std::size_t T = walk.length();
    if (T == 0) throw InvalidInput("goodness needs a walk of length >= 1");
    if (walk.degrees.size() != T) throw InvalidInput("walk lacks degree annotations");

    GoodnessReport report;
    const double cutoff = beta * d_bar;
    for (std::size_t i = 0; i < T; ++i)
        if (static_cast<double>(walk.degrees[i]) < cutoff) ++report.bad_count;
    // B <= 1.1 beta T, with slack for the rounding of 1.1 * beta.
    report.is_good = static_cast<double>(report.bad_count) <= 1.1 * beta * static_cast<double>(T) + 1e-9;
    return report;
}

EdgeSet odd_colors(const ColoredWalk& walk) {
    if (!walk.is_closed()) throw InvalidInput("odd colors are defined for closed walks only");
    auto colors = walk.colors();
    std::sort(colors.begin(), colors.end());
    EdgeSet odd;
    for (std::size_t i = 0; i < colors.size();) {
        std::size_t j = i;
        while (j < colors.size() && colors[j] == colors[i]) ++j;
        if ((j - i) % 2 == 1) odd.push_back(colors[i]);
        i = j;
    }
    return odd;
}

WalkPlan plan_walk_search(const KikuchiParams& params, const WalkSearchConfig& config) {
    if (config.T < 1) throw InvalidInput("walk length T must be >= 1");
    if (!(config.beta > 0.0 && config.beta <= 1.0)) throw InvalidInput("beta must lie in (0, 1]");
    if (!(config.epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
    if (!(config.delta > 0.0 && config.delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");

    const bool desk = config.profile == Profile::Desk;
    const double c1 = desk ? config.c1 : 200.0;
    const double n_eps = params.vertex_count_pow(config.epsilon);

    WalkPlan plan;
    plan.walks_per_attempt = saturating_ceil(c1 * params.vertex_count_pow(0.5));
    plan.iterations = saturating_ceil(100000.0 * n_eps + 100000.0 * std::log2(1.0 / config.delta));
    plan.target_covers = saturating_ceil(10.0 * n_eps);
    if (desk) {
        if (config.walks_per_attempt) plan.walks_per_attempt = *config.walks_per_attempt;
        if (config.iterations) plan.iterations = *config.iterations;
        if (config.target_covers) plan.target_covers = *config.target_covers;
    }
    if (plan.walks_per_attempt < 2) throw InvalidInput("walks per attempt L must be >= 2");

    const double T = static_cast<double>(config.T);
    plan.required_degree = 300.0 * params.vertex_count_pow(4.0 / T) * T;
    plan.degree_precondition = params.d_bar() >= plan.required_degree;
    return plan;
}

std::optional<ClosedWalk> find_good_closed_walk(const KikuchiGraph& graph, const KikuchiParams& params,
                                                const KikuchiVertex& start, const WalkSearchConfig& config,
                                                std::uint64_t walks_per_attempt, const RngStream& rng) {
    struct Arrival {
        std::size_t index;
        ColoredWalk walk;
    };
    const double d_bar = params.d_bar();
    std::map<KikuchiVertex, Arrival> first_good;
    for (std::uint64_t i = 0; i < walks_per_attempt; ++i) {
        RngStream stream = rng.fork(i);
        ColoredWalk walk = run_walk(graph, start, config.T, stream);
        if (!assess_goodness(walk, config.beta, d_bar).is_good) continue;
        KikuchiVertex end = walk.end();
        auto it = first_good.find(end);
        if (it == first_good.end()) {
            first_good.emplace(std::move(end), Arrival{i, std::move(walk)});
            continue;
        }
        return ClosedWalk{concatenate(it->second.walk, reversed(walk)), it->second.index, i};
    }
    return std::nullopt;
}

InsufficientCovers::InsufficientCovers(HarvestResult partial)
    : std::runtime_error("found " + std::to_string(partial.covers.size()) + " of " +
                         std::to_string(partial.plan.target_covers) + " distinct covers"),
      partial_(std::move(partial)) {}

HarvestResult harvest_distinct_covers(const KikuchiGraph& graph, const KikuchiParams& params,
                                      const WalkSearchConfig& config, const RngStream& rng,
                                      const HarvestObserver& observer) {
    HarvestResult result;
    result.plan = plan_walk_search(params, config);
    const WalkPlan& plan = result.plan;
    if (config.profile == Profile::Paper && !plan.degree_precondition)
        throw InvalidInput("average Kikuchi degree is below 300 N^{4/T} T");
    if (graph.hypergraph().m() == 0) throw InsufficientCovers(std::move(result));

    std::set<EdgeSet> seen;
    auto& stats = result.stats;
    for (std::uint64_t r = 0; r < plan.iterations && result.covers.size() < plan.target_covers; ++r) {
        const RngStream iteration = rng.fork(r);
        RngStream start_stream = iteration.fork(0);
        const KikuchiVertex start = graph.sample_stationary(start_stream);
        auto closed = find_good_closed_walk(graph, params, start, config, plan.walks_per_attempt, iteration.fork(1));
        ++stats.iterations;

        const EdgeSet* kept = nullptr;
        if (closed) {
            ++stats.closed_walks;
            EdgeSet cover = odd_colors(closed->walk);
            if (cover.empty()) {
                ++stats.trivial;
            } else if (seen.insert(cover).second) {
                result.covers.push_back(std::move(cover));
                kept = &result.covers.back();
            } else {
                ++stats.duplicates;
            }
        }
        if (observer) observer(HarvestEvent{r, closed ? &*closed : nullptr, kept, stats});
    }
    if (result.covers.size() < plan.target_covers) throw InsufficientCovers(std::move(result));
    return result;
}

} // namespace kxor
