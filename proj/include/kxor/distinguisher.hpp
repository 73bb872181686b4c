#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kxor/hypergraph.hpp"
#include "kxor/instance.hpp"
#include "kxor/kikuchi.hpp"
#include "kxor/rng.hpp"
#include "kxor/walk.hpp"

namespace kxor {

/// Assignment of edge indices to parts [0, parts).
struct BlockPartition {
    std::vector<std::uint32_t> part_of;
    std::uint32_t parts = 0;

    std::vector<std::size_t> part_sizes() const;
};

/// Uniform equipartition of m edges into P parts: each edge gets a uniform
/// key, edges are sorted by key and cut into consecutive runs of size
/// ceil(m/P) or floor(m/P).
BlockPartition sample_equipartition(std::size_t m, std::uint32_t parts, RngStream& rng);

/// No two edges of `cover` share a part.
bool is_shattered(std::span<const EdgeIndex> cover, const BlockPartition& partition);

enum class NoiseMode {
    Uniform, // xi_e ~ Unif[0, 1]
    Unit,    // xi_e = 1 (test hook)
};

struct DistinguisherConfig {
    Profile profile = Profile::Paper;
    std::size_t T = 1;
    double epsilon = 0.1;
    double delta = 0.01;
    double rho = 0.5;
    double c_anti = 2.0;
    /// Desk-profile knobs; the paper profile always uses 0.1 and 0.6.
    double shatter_base = 0.1;
    double threshold_exponent = 0.6;
    std::uint64_t loop_cap = 1'000'000;
    unsigned repetitions = 1;
    NoiseMode noise = NoiseMode::Uniform;
};

struct DistinguisherPlan {
    std::uint32_t parts = 0;            // 2T
    std::uint64_t loop_bound = 0;       // S = ceil(10 e^{2T}), possibly capped
    bool loop_capped = false;
    double shatter_floor_raw = 0.0;     // N^eps * base^T
    std::size_t shatter_floor = 1;      // max(1, ceil(raw))
    bool floor_clamped = false;
    double threshold = 0.0;             // N^{0.6 eps}
    std::uint64_t required_covers = 0;  // ceil(10 N^eps)
};

DistinguisherPlan plan_distinguisher(const KikuchiParams& params, const DistinguisherConfig& config);

struct Selection {
    BlockPartition partition;
    std::vector<EvenCover> kept;
    std::uint64_t iterations = 0;
};

/// Samples up to S equipartitions into 2T parts; on the first one that
/// shatters at least `shatter_floor` covers, keeps the first `shatter_floor`
/// of them in input order. Iteration s uses rng.fork(s).
std::optional<Selection> select_shattered_covers(std::span<const EvenCover> covers, std::size_t m,
                                                 const DistinguisherPlan& plan, const RngStream& rng);

/// sum_C prod_{e in C} xi_e b_e with fresh xi_e (edge e uses rng.at(e)).
/// Summation is a pairwise tree over covers in order.
double evaluate_noised_polynomial(std::span<const EvenCover> covers, std::span<const Sign> signs,
                                  const RngStream& rng, NoiseMode noise = NoiseMode::Uniform);

enum class Decision { Null, Planted, Fail };

const char* to_string(Decision decision) noexcept;

struct DistinguishResult {
    Decision decision = Decision::Fail;
    double statistic = 0.0;
    double threshold = 0.0;
    std::uint64_t loop_iterations = 0;
    std::size_t kept = 0;
    unsigned planted_votes = 0;
    unsigned repetitions = 0;
};

/// Decision rule: Planted iff statistic >= threshold. Exposed for the
/// boundary case.
Decision decide(double statistic, double threshold) noexcept;

/// Selection, one noised evaluation, threshold comparison. With
/// repetitions > 1 (desk profile) each repetition uses its own sub-stream and
/// the majority vote decides; `statistic` reports the first repetition.
DistinguishResult distinguish(std::span<const EvenCover> covers, const SignedInstance& instance,
                              const DistinguisherPlan& plan, const DistinguisherConfig& config,
                              const RngStream& rng);

/// Constants entering the asymptotic parameter choices.
struct TheoryConfig {
    double c_anti = 2.0;
    /// T's noise term is (rho / rho_scale)^{-rho_exponent}: (2, 2) for the
    /// main-theorem form, (1, 4) for the lemma form.
    double rho_scale = 2.0;
    double rho_exponent = 2.0;
    double delta = 0.01;
    /// Universal constant in the suggested-ell prefactor.
    double ell_constant = 2.0;
    /// Optional explicit epsilon (otherwise 10 log(1/rho) / log k).
    std::optional<double> epsilon;
    /// Desk T override, used only for the desk feasibility verdict.
    std::optional<std::size_t> desk_T;
};

struct TheoremParams {
    double epsilon = 0.0;
    double T_real = 0.0;
    std::size_t T = 0;                   // floor(T_real)
    double d_bar = 0.0;
    double ln_N = 0.0;
    double log2_degree_requirement = 0.0; // log2 of 120 eps (10 C^40 (2/rho)^2)^{10/eps} log N
    double log10_degree_gap = 0.0;        // log10(requirement / d_bar); <= 0 means satisfied
    bool degree_ok = false;
    double walk_degree_requirement = 0.0; // 300 N^{4/T} T (for the T in use)
    bool walk_degree_ok = false;
    bool delta_ok = false;                // 4 log2(1/delta) < T
    bool walk_length_ok = false;          // T >= 100
    double density = 0.0;                 // m / (n^{k/2} log2 n)
    std::optional<std::uint64_t> suggested_ell;
    bool ell_within_sqrt_n = false;
    bool paper_feasible = false;
    /// Desk runs need T >= 2: with T = 1 every collision of two one-step
    /// walks reuses the same color, so all closed walks are trivial.
    std::size_t desk_T = 0;
    bool desk_feasible = false;
};

/// Throws InvalidInput unless 0 < rho <= 1 and k >= 4 is even.
TheoremParams derive_theorem_params(std::uint32_t n, std::uint32_t k, std::size_t m, std::uint32_t ell,
                                    double rho, const TheoryConfig& config);

} // namespace kxor
