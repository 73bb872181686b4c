#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kxor/hypergraph.hpp"
#include "kxor/kikuchi.hpp"
#include "kxor/rng.hpp"

namespace kxor {

enum class Profile { Paper, Desk };

const char* to_string(Profile profile) noexcept;

struct WalkStep {
    EdgeIndex color;
    KikuchiVertex to;
};

/// w_0, ..., w_T with the hyperedge color of every step. `degrees[i]` is
/// deg(w_i) for i < T as observed while walking; an aborted walk stopped at
/// an isolated vertex and is shorter than requested.
struct ColoredWalk {
    KikuchiVertex start;
    std::vector<WalkStep> steps;
    std::vector<std::size_t> degrees;
    bool aborted = false;

    std::size_t length() const noexcept { return steps.size(); }
    const KikuchiVertex& vertex(std::size_t i) const { return i == 0 ? start : steps.at(i - 1).to; }
    const KikuchiVertex& end() const { return vertex(length()); }
    bool is_closed() const { return end() == start; }
    std::vector<EdgeIndex> colors() const;
};

ColoredWalk run_walk(const KikuchiGraph& graph, const KikuchiVertex& start, std::size_t T, RngStream& rng);

/// Same vertices in reverse order, colors reversed to match.
ColoredWalk reversed(const ColoredWalk& walk);

/// `first` followed by `second`; `second` must start where `first` ends.
ColoredWalk concatenate(const ColoredWalk& first, const ColoredWalk& second);

struct GoodnessReport {
    std::size_t bad_count = 0;
    bool is_good = false;
};

/// Counts w_i (0 <= i < T) with deg(w_i) < beta * d_bar; good iff the count is
/// at most 1.1 * beta * T. Aborted walks are never good.
GoodnessReport assess_goodness(const ColoredWalk& walk, double beta, double d_bar);

/// Colors used an odd number of times. Throws InvalidInput on an open walk.
EdgeSet odd_colors(const ColoredWalk& walk);

struct WalkSearchConfig {
    Profile profile = Profile::Paper;
    std::size_t T = 1;
    double c1 = 200.0;
    double beta = 0.05;
    double epsilon = 0.1;
    double delta = 0.01;
    /// Desk-profile overrides; the paper profile derives these from N.
    std::optional<std::uint64_t> walks_per_attempt;
    std::optional<std::uint64_t> iterations;
    std::optional<std::uint64_t> target_covers;
};

/// Resolved loop sizes for a walk search on a graph with the given params.
struct WalkPlan {
    std::uint64_t walks_per_attempt = 0; // L = ceil(C1 sqrt N)
    std::uint64_t iterations = 0;        // R = 100000 N^eps + 100000 log2(1/delta)
    std::uint64_t target_covers = 0;     // ceil(10 N^eps)
    double required_degree = 0.0;        // 300 N^{4/T} T
    bool degree_precondition = false;
};

/// Throws InvalidInput when the config violates L >= 2, T >= 1, 0 < beta <= 1.
WalkPlan plan_walk_search(const KikuchiParams& params, const WalkSearchConfig& config);

struct ClosedWalk {
    ColoredWalk walk; // length 2T, (W_i, W_j^rev)
    std::size_t first = 0;
    std::size_t second = 0;
};

/// Draws up to L walks of length T from `start` (walk i uses rng.fork(i))
/// and returns the first collision between two good walks, or nothing.
std::optional<ClosedWalk> find_good_closed_walk(const KikuchiGraph& graph, const KikuchiParams& params,
                                                const KikuchiVertex& start, const WalkSearchConfig& config,
                                                std::uint64_t walks_per_attempt, const RngStream& rng);

struct HarvestStats {
    std::uint64_t iterations = 0;
    std::uint64_t closed_walks = 0;
    std::uint64_t trivial = 0;
    std::uint64_t duplicates = 0;
};

struct HarvestResult {
    std::vector<EvenCover> covers;
    HarvestStats stats;
    WalkPlan plan;
};

/// Per-iteration notification; `closed` is null when the collision search
/// failed.
struct HarvestEvent {
    std::uint64_t iteration;
    const ClosedWalk* closed;
    const EdgeSet* cover; // null unless a new distinct cover was kept
    const HarvestStats& stats;
};
using HarvestObserver = std::function<void(const HarvestEvent&)>;

/// Thrown when fewer than the target number of covers were found.
class InsufficientCovers : public std::runtime_error {
public:
    explicit InsufficientCovers(HarvestResult partial);
    const HarvestResult& partial() const noexcept { return partial_; }

private:
    HarvestResult partial_;
};

/// Repeats find_good_closed_walk from stationary starts and keeps each
/// nonempty odd-color set not seen before, until the target is reached or
/// the iteration budget runs out. In the paper profile the average degree
/// must satisfy the 300 N^{4/T} T precondition (InvalidInput otherwise).
HarvestResult harvest_distinct_covers(const KikuchiGraph& graph, const KikuchiParams& params,
                                      const WalkSearchConfig& config, const RngStream& rng,
                                      const HarvestObserver& observer = {});

} // namespace kxor
