#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kxor/distinguisher.hpp"
#include "kxor/hypergraph.hpp"
#include "kxor/walk.hpp"

namespace kxor {

inline constexpr const char* kReportSchema = "kxor-report/1";

/// Everything a run needs. Fields marked desk are honoured only in the desk
/// profile; the paper profile derives them.
struct ExperimentConfig {
    std::uint32_t n = 20;
    std::uint32_t k = 4;
    std::optional<std::size_t> m;
    std::optional<double> density; // m = density * n^{k/2} * log2 n
    std::uint32_t ell = 2;
    double rho = 0.9;
    std::optional<double> epsilon;
    double delta = 0.01;
    Profile profile = Profile::Desk;
    std::uint64_t seed = 1;
    std::size_t trials = 1;
    unsigned workers = 1;
    bool random_z = false;

    double c_anti = 2.0;
    double beta = 0.05;
    // desk
    std::optional<std::size_t> T;
    double c1 = 200.0;
    std::optional<std::uint64_t> walks_per_attempt;
    std::optional<std::uint64_t> iterations;
    std::optional<std::uint64_t> target_covers;
    double shatter_base = 0.1;
    double threshold_exponent = 0.6;
    std::uint64_t loop_cap = 1'000'000;
    unsigned repetitions = 1;

    /// Throws InvalidInput when neither m nor density is usable.
    std::size_t resolved_m() const;
    /// Throws InvalidInput on any constraint violation.
    void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& config);
/// Missing keys keep their defaults.
ExperimentConfig config_from_json(const nlohmann::json& doc);

/// Theorem-level parameters plus the walk and distinguisher settings a run
/// with this config would use.
struct ResolvedParams {
    TheoremParams theory;
    KikuchiParams kikuchi;
    WalkSearchConfig walk;
    WalkPlan walk_plan;
    DistinguisherConfig distinguisher;
    DistinguisherPlan distinguisher_plan;
    bool feasible = false;
    std::vector<std::string> notes;
};

/// Kikuchi parameters depend only on (n, k, m, ell), so no hypergraph is
/// needed.
ResolvedParams resolve_params(const ExperimentConfig& config);

nlohmann::json to_json(const ResolvedParams& params);

/// Feasibility verdicts for both profiles, with multiplicative gaps.
nlohmann::json check_feasibility(const ExperimentConfig& config);

struct TrialOutcome {
    std::size_t trial = 0;
    bool harvest_ok = false;
    std::size_t covers_found = 0;
    std::uint64_t harvest_iterations = 0;
    DistinguishResult null_result;
    DistinguishResult planted_result;
    double generate_seconds = 0.0;
    double harvest_seconds = 0.0;
    double distinguish_seconds = 0.0;
    double seconds = 0.0;
};

struct ExperimentReport {
    nlohmann::json detail;
    std::string csv;
    std::vector<TrialOutcome> trials;
    bool feasible = false;
    std::size_t correct = 0;
    std::size_t decisions = 0;
    std::size_t harvest_failures = 0;

    double accuracy() const { return decisions == 0 ? 0.0 : double(correct) / double(decisions); }
    /// 0 success, 2 infeasible, 3 harvest failure.
    int exit_code() const;
};

using TrialObserver = std::function<void(const TrialOutcome&)>;

/// Per trial: sample (or reuse) the hypergraph, harvest covers once, sample
/// paired Null and Planted signs and run the distinguisher on both with the
/// same selection and noise streams. Trial t uses seed hash(seed, t).
ExperimentReport run_experiment(const ExperimentConfig& config, const std::optional<Hypergraph>& fixed = {},
                                const TrialObserver& observer = {});

/// Report with every "timing" member removed, serialized compactly.
std::string deterministic_dump(const nlohmann::json& report);
/// FNV-1a of deterministic_dump, as 16 hex digits.
std::string report_digest(const nlohmann::json& report);

std::uint64_t trial_seed(std::uint64_t root, std::uint64_t trial) noexcept;

/// Success rate of find_good_closed_walk from stationary starts.
struct CollisionRate {
    std::size_t starts = 0;
    std::size_t successes = 0;
    std::size_t nontrivial = 0;
    double rate() const { return starts == 0 ? 0.0 : double(successes) / double(starts); }
};

CollisionRate measure_collision_rate(const Hypergraph& graph, std::uint32_t ell, const WalkSearchConfig& config,
                                     std::size_t starts, const RngStream& rng);

struct CalibrationSweep {
    std::vector<std::uint32_t> n_values;
    std::vector<std::uint32_t> ell_values{2, 3};
    std::uint32_t k = 4;
    double edge_fraction = 0.25; // m = round(fraction * C(n, k))
    std::size_t T = 2;
    double c1 = 2.0;
    double beta = 0.05;
    std::size_t starts = 200;
    double required_rate = 0.05;
    std::uint64_t seed = 1;
};

struct CalibrationPoint {
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::uint32_t ell = 0;
    std::size_t m = 0;
    std::size_t T = 0;
    CollisionRate rate;
};

/// First sweep point (n ascending, then ell) whose collision rate reaches the
/// required rate.
std::optional<CalibrationPoint> calibrate_desk_point(const CalibrationSweep& sweep,
                                                     const std::function<void(const CalibrationPoint&)>& log = {});

} // namespace kxor
