#include "kxor/distinguisher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/container/small_vector.hpp>

#include "kxor/bigmath.hpp"
#include "kxor/errors.hpp"

namespace kxor {

namespace {

constexpr double kUint64Ceiling = 1.8e19;

std::uint64_t saturating_ceil(double x) {
    if (!(x < kUint64Ceiling)) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(std::ceil(x));
}

double pairwise_sum(std::span<const double> terms) {
    if (terms.size() <= 8) return std::accumulate(terms.begin(), terms.end(), 0.0);
    const std::size_t mid = terms.size() / 2;
    return pairwise_sum(terms.first(mid)) + pairwise_sum(terms.subspan(mid));
}

} // namespace

std::vector<std::size_t> BlockPartition::part_sizes() const {
    std::vector<std::size_t> sizes(parts, 0);
    for (auto p : part_of) ++sizes[p];
    return sizes;
}

BlockPartition sample_equipartition(std::size_t m, std::uint32_t parts, RngStream& rng) {
    if (parts < 1) throw InvalidInput("a partition needs at least one part");
    std::vector<double> key(m);
    for (auto& u : key) u = rng.uniform01();
    std::vector<EdgeIndex> order(m);
    std::iota(order.begin(), order.end(), EdgeIndex{0});
    std::sort(order.begin(), order.end(), [&](EdgeIndex a, EdgeIndex b) {
        return key[a] < key[b] || (key[a] == key[b] && a < b);
    });

    BlockPartition partition{std::vector<std::uint32_t>(m, 0), parts};
    const std::size_t base = m / parts;
    const std::size_t extra = m % parts;
    std::size_t position = 0;
    for (std::uint32_t p = 0; p < parts; ++p) {
        const std::size_t size = base + (p < extra ? 1 : 0);
        for (std::size_t i = 0; i < size; ++i) partition.part_of[order[position++]] = p;
    }
    return partition;
}

bool is_shattered(std::span<const EdgeIndex> cover, const BlockPartition& partition) {
    boost::container::small_vector<std::uint32_t, 32> used;
    used.reserve(cover.size());
    for (EdgeIndex e : cover) used.push_back(partition.part_of.at(e));
    std::sort(used.begin(), used.end());
    return std::adjacent_find(used.begin(), used.end()) == used.end();
}

DistinguisherPlan plan_distinguisher(const KikuchiParams& params, const DistinguisherConfig& config) {
    if (config.T < 1) throw InvalidInput("T must be >= 1");
    if (!(config.epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
    if (!(config.rho > 0.0 && config.rho <= 1.0)) throw InvalidInput("rho must lie in (0, 1]");
    if (!(config.delta > 0.0 && config.delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");

    const bool desk = config.profile == Profile::Desk;
    const double base = desk ? config.shatter_base : 0.1;
    const double exponent = desk ? config.threshold_exponent : 0.6;
    if (!(base > 0.0 && base <= 1.0)) throw InvalidInput("shatter base must lie in (0, 1]");
    if (!(exponent > 0.0)) throw InvalidInput("threshold exponent must be positive");

    const double T = static_cast<double>(config.T);
    const double ln_n_eps = config.epsilon * params.ln_vertex_count;

    DistinguisherPlan plan;
    plan.parts = static_cast<std::uint32_t>(2 * config.T);

    // S = 10 e^{2T}, kept in log space until the comparison with the cap.
    const double ln_loop = std::log(10.0) + 2.0 * T;
    plan.loop_bound = saturating_ceil(std::exp(std::min(ln_loop, 50.0)));
    if (desk && (ln_loop > std::log(double(config.loop_cap)) || plan.loop_bound > config.loop_cap)) {
        plan.loop_bound = config.loop_cap;
        plan.loop_capped = true;
    }

    plan.shatter_floor_raw = std::exp(ln_n_eps + T * std::log(base));
    plan.floor_clamped = plan.shatter_floor_raw < 1.0;
    plan.shatter_floor = static_cast<std::size_t>(std::max<std::uint64_t>(1, saturating_ceil(plan.shatter_floor_raw)));
    plan.threshold = std::exp(exponent * ln_n_eps);
    plan.required_covers = saturating_ceil(10.0 * std::exp(ln_n_eps));
    return plan;
}

std::optional<Selection> select_shattered_covers(std::span<const EvenCover> covers, std::size_t m,
                                                 const DistinguisherPlan& plan, const RngStream& rng) {
    for (std::uint64_t s = 0; s < plan.loop_bound; ++s) {
        RngStream stream = rng.fork(s);
        BlockPartition partition = sample_equipartition(m, plan.parts, stream);
        std::vector<EvenCover> kept;
        for (const auto& cover : covers)
            if (is_shattered(cover, partition)) kept.push_back(cover);
        if (kept.size() >= plan.shatter_floor) {
            kept.resize(plan.shatter_floor);
            return Selection{std::move(partition), std::move(kept), s + 1};
        }
    }
    return std::nullopt;
}

double evaluate_noised_polynomial(std::span<const EvenCover> covers, std::span<const Sign> signs,
                                  const RngStream& rng, NoiseMode noise) {
    if (covers.empty()) throw InvalidInput("the cover polynomial has no monomials");
    std::vector<double> terms;
    terms.reserve(covers.size());
    for (const auto& cover : covers) {
        double term = 1.0;
        for (EdgeIndex e : cover) {
            const double xi = noise == NoiseMode::Unit ? 1.0 : RngStream::to_unit(rng.at(e));
            term *= xi * static_cast<double>(signs[e]);
        }
        terms.push_back(term);
    }
    return pairwise_sum(terms);
}

const char* to_string(Decision decision) noexcept {
    switch (decision) {
    case Decision::Null: return "null";
    case Decision::Planted: return "planted";
    case Decision::Fail: return "fail";
    }
    return "fail";
}

Decision decide(double statistic, double threshold) noexcept {
    return statistic >= threshold ? Decision::Planted : Decision::Null;
}

DistinguishResult distinguish(std::span<const EvenCover> covers, const SignedInstance& instance,
                              const DistinguisherPlan& plan, const DistinguisherConfig& config,
                              const RngStream& rng) {
    if (covers.empty()) throw InvalidInput("distinguisher needs at least one even cover");
    if (instance.signs.size() != instance.graph.m()) throw InvalidInput("sign vector length differs from m");
    for (const auto& cover : covers) {
        if (cover.empty() || cover.size() > 2 * config.T)
            throw InvalidInput("covers must be nonempty with at most 2T edges");
        if (cover.back() >= instance.graph.m()) throw InvalidInput("cover references a missing edge");
    }
    if (config.profile == Profile::Paper && covers.size() < plan.required_covers)
        throw InvalidInput("paper profile needs at least ceil(10 N^eps) covers");

    const unsigned repetitions = config.profile == Profile::Desk ? std::max(1u, config.repetitions) : 1u;
    DistinguishResult result;
    result.threshold = plan.threshold;
    result.repetitions = repetitions;
    unsigned valid = 0;
    for (unsigned r = 0; r < repetitions; ++r) {
        auto selection = select_shattered_covers(covers, instance.graph.m(), plan, rng.fork(2 * r));
        if (!selection) continue;
        const double statistic =
            evaluate_noised_polynomial(selection->kept, instance.signs, rng.fork(2 * r + 1), config.noise);
        if (valid == 0) {
            result.statistic = statistic;
            result.loop_iterations = selection->iterations;
            result.kept = selection->kept.size();
        }
        ++valid;
        if (decide(statistic, plan.threshold) == Decision::Planted) ++result.planted_votes;
    }
    if (valid == 0)
        result.decision = Decision::Fail;
    else
        result.decision = 2 * result.planted_votes > valid ? Decision::Planted : Decision::Null;
    return result;
}

TheoremParams derive_theorem_params(std::uint32_t n, std::uint32_t k, std::size_t m, std::uint32_t ell,
                                    double rho, const TheoryConfig& config) {
    if (!(rho > 0.0 && rho <= 1.0)) throw InvalidInput("rho must lie in (0, 1]");
    if (k < 4 || k % 2 != 0) throw InvalidInput("k must be an even integer >= 4");
    if (!(config.delta > 0.0 && config.delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");

    const KikuchiParams kikuchi = compute_params(n, k, m, ell);
    constexpr double inf = std::numeric_limits<double>::infinity();

    TheoremParams p;
    p.epsilon = config.epsilon.value_or(10.0 * std::log2(1.0 / rho) / std::log2(double(k)));
    p.d_bar = kikuchi.d_bar();
    p.ln_N = kikuchi.ln_vertex_count;
    const double log2_N = kikuchi.log2_vertex_count();

    const double log2_noise_term = std::log2(10.0) + 40.0 * std::log2(config.c_anti) -
                                   config.rho_exponent * std::log2(rho / config.rho_scale);
    p.T_real = 0.4 * p.epsilon * log2_N / log2_noise_term;
    p.T = p.T_real >= 1.0 ? static_cast<std::size_t>(std::floor(p.T_real)) : 0;

    // 120 eps (10 C^40 (2/rho)^2)^{10/eps} log N, in log2.
    if (p.epsilon > 0.0 && log2_N > 0.0) {
        const double log2_base = std::log2(10.0) + 40.0 * std::log2(config.c_anti) + 2.0 * std::log2(2.0 / rho);
        p.log2_degree_requirement = std::log2(120.0 * p.epsilon) + (10.0 / p.epsilon) * log2_base + std::log2(log2_N);
    } else {
        p.log2_degree_requirement = inf;
    }
    const double log2_d_bar = p.d_bar > 0.0 ? std::log2(p.d_bar) : -inf;
    p.log10_degree_gap = (p.log2_degree_requirement - log2_d_bar) * std::log10(2.0);
    p.degree_ok = p.d_bar > 0.0 && log2_d_bar >= p.log2_degree_requirement;

    if (p.T >= 1) {
        const double T = static_cast<double>(p.T);
        p.walk_degree_requirement = 300.0 * kikuchi.vertex_count_pow(4.0 / T) * T;
        p.walk_degree_ok = p.d_bar >= p.walk_degree_requirement;
    } else {
        p.walk_degree_requirement = inf;
    }
    p.delta_ok = 4.0 * std::log2(1.0 / config.delta) < static_cast<double>(p.T);
    p.walk_length_ok = p.T >= 100;

    const double half = k / 2.0;
    p.density = static_cast<double>(m) / (std::pow(double(n), half) * std::log2(double(n)));
    if (m > 0 && n > 1) {
        const double power = 2.0 / (double(k) - 2.0);
        const double prefactor = std::pow(config.ell_constant * std::log2(1.0 / rho) / std::log2(double(k)), power);
        const double quarter = std::pow(rho * rho * static_cast<double>(binomial(k, k / 2)), -power);
        const double main = std::pow(1.0 / p.density, power);
        const double raw = prefactor * quarter * main;
        if (std::isfinite(raw))
            p.suggested_ell = std::max<std::uint64_t>(static_cast<std::uint64_t>(std::ceil(raw)), k);
    }
    p.ell_within_sqrt_n = double(ell) <= std::sqrt(double(n));

    p.paper_feasible = p.T >= 1 && p.degree_ok && p.walk_degree_ok && p.delta_ok && p.walk_length_ok;
    p.desk_T = config.desk_T.value_or(p.T);
    p.desk_feasible = p.desk_T >= 2 && p.d_bar > 0.0 && p.epsilon > 0.0;
    return p;
}

} // namespace kxor
