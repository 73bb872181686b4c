#include "kxor/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

#include "kxor/errors.hpp"
#include "kxor/instance.hpp"
#include "kxor/kikuchi.hpp"

namespace kxor {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename T>
json optional_json(const std::optional<T>& value) {
    return value ? json(*value) : json(nullptr);
}

template <typename T>
void read_optional(const json& doc, const char* key, std::optional<T>& out) {
    if (doc.contains(key) && !doc.at(key).is_null()) out = doc.at(key).get<T>();
}

template <typename T>
void read_value(const json& doc, const char* key, T& out) {
    if (doc.contains(key) && !doc.at(key).is_null()) out = doc.at(key).get<T>();
}

json result_json(const DistinguishResult& r) {
    return {
        {"decision", to_string(r.decision)},
        {"statistic", r.statistic},
        {"threshold", r.threshold},
        {"loop_iterations", r.loop_iterations},
        {"kept_covers", r.kept},
        {"planted_votes", r.planted_votes},
        {"repetitions", r.repetitions},
    };
}

void strip_timing(json& doc) {
    if (doc.is_object()) {
        doc.erase("timing");
        for (auto& [key, value] : doc.items()) strip_timing(value);
    } else if (doc.is_array()) {
        for (auto& value : doc) strip_timing(value);
    }
}

std::string format_double(double x) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", x);
    return buffer;
}

} // namespace

std::size_t ExperimentConfig::resolved_m() const {
    if (m) return *m;
    if (density) {
        if (!(*density >= 0.0)) throw InvalidInput("density must be non-negative");
        const double value = *density * std::pow(double(n), k / 2.0) * std::log2(double(n));
        return static_cast<std::size_t>(std::llround(value));
    }
    throw InvalidInput("either m or density must be given");
}

void ExperimentConfig::validate() const {
    if (n < 1) throw InvalidInput("n must be positive");
    if (k < 4 || k % 2 != 0) throw InvalidInput("k must be an even integer >= 4");
    if (k > n) throw InvalidInput("k must not exceed n");
    if (ell < k / 2 || ell + k / 2 > n) throw InvalidInput("ell must satisfy k/2 <= ell <= n - k/2");
    if (!(rho > 0.0 && rho <= 1.0)) throw InvalidInput("rho must lie in (0, 1]");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
    if (epsilon && !(*epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
    if (!(beta > 0.0 && beta <= 1.0)) throw InvalidInput("beta must lie in (0, 1]");
    if (!(c_anti > 1.2)) throw InvalidInput("c_anti must exceed 1.2");
    if (workers < 1) throw InvalidInput("workers must be >= 1");
    if (T && *T < 1) throw InvalidInput("T must be >= 1");
    if (!(c1 > 0.0)) throw InvalidInput("c1 must be positive");
    if (!(shatter_base > 0.0 && shatter_base <= 1.0)) throw InvalidInput("shatter_base must lie in (0, 1]");
    if (!(threshold_exponent > 0.0)) throw InvalidInput("threshold_exponent must be positive");
    if (repetitions < 1) throw InvalidInput("repetitions must be >= 1");
    (void)resolved_m();
}

json to_json(const ExperimentConfig& c) {
    return {
        {"n", c.n},
        {"k", c.k},
        {"m", optional_json(c.m)},
        {"density", optional_json(c.density)},
        {"ell", c.ell},
        {"rho", c.rho},
        {"epsilon", optional_json(c.epsilon)},
        {"delta", c.delta},
        {"profile", to_string(c.profile)},
        {"seed", c.seed},
        {"trials", c.trials},
        {"random_z", c.random_z},
        {"c_anti", c.c_anti},
        {"beta", c.beta},
        {"T", optional_json(c.T)},
        {"c1", c.c1},
        {"walks_per_attempt", optional_json(c.walks_per_attempt)},
        {"iterations", optional_json(c.iterations)},
        {"target_covers", optional_json(c.target_covers)},
        {"shatter_base", c.shatter_base},
        {"threshold_exponent", c.threshold_exponent},
        {"loop_cap", c.loop_cap},
        {"repetitions", c.repetitions},
    };
}

ExperimentConfig config_from_json(const json& doc) {
    ExperimentConfig c;
    try {
        read_value(doc, "n", c.n);
        read_value(doc, "k", c.k);
        read_optional(doc, "m", c.m);
        read_optional(doc, "density", c.density);
        read_value(doc, "ell", c.ell);
        read_value(doc, "rho", c.rho);
        read_optional(doc, "epsilon", c.epsilon);
        read_value(doc, "delta", c.delta);
        if (doc.contains("profile")) {
            const auto profile = doc.at("profile").get<std::string>();
            if (profile == "paper")
                c.profile = Profile::Paper;
            else if (profile == "desk")
                c.profile = Profile::Desk;
            else
                throw InvalidInput("profile must be \"paper\" or \"desk\"");
        }
        read_value(doc, "seed", c.seed);
        read_value(doc, "trials", c.trials);
        read_value(doc, "workers", c.workers);
        read_value(doc, "random_z", c.random_z);
        read_value(doc, "c_anti", c.c_anti);
        read_value(doc, "beta", c.beta);
        read_optional(doc, "T", c.T);
        read_value(doc, "c1", c.c1);
        read_optional(doc, "walks_per_attempt", c.walks_per_attempt);
        read_optional(doc, "iterations", c.iterations);
        read_optional(doc, "target_covers", c.target_covers);
        read_value(doc, "shatter_base", c.shatter_base);
        read_value(doc, "threshold_exponent", c.threshold_exponent);
        read_value(doc, "loop_cap", c.loop_cap);
        read_value(doc, "repetitions", c.repetitions);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed experiment config: ") + e.what());
    }
    return c;
}

ResolvedParams resolve_params(const ExperimentConfig& config) {
    config.validate();
    const std::size_t m = config.resolved_m();
    const bool desk = config.profile == Profile::Desk;

    ResolvedParams out;
    TheoryConfig theory;
    theory.c_anti = config.c_anti;
    theory.delta = config.delta;
    theory.epsilon = config.epsilon;
    theory.desk_T = config.T;
    out.theory = derive_theorem_params(config.n, config.k, m, config.ell, config.rho, theory);
    out.kikuchi = compute_params(config.n, config.k, m, config.ell);
    out.feasible = desk ? out.theory.desk_feasible : out.theory.paper_feasible;
    if (!out.feasible) {
        out.notes.push_back(desk ? "desk profile needs T >= 2, epsilon > 0 and a nonzero average degree"
                                 : "paper-profile preconditions fail; see the feasibility record");
        return out;
    }

    const std::size_t T = desk ? out.theory.desk_T : out.theory.T;
    out.walk.profile = config.profile;
    out.walk.T = T;
    out.walk.c1 = config.c1;
    out.walk.beta = config.beta;
    out.walk.epsilon = out.theory.epsilon;
    out.walk.delta = config.delta;
    out.walk.walks_per_attempt = config.walks_per_attempt;
    out.walk.iterations = config.iterations;
    out.walk.target_covers = config.target_covers;
    out.walk_plan = plan_walk_search(out.kikuchi, out.walk);

    out.distinguisher.profile = config.profile;
    out.distinguisher.T = T;
    out.distinguisher.epsilon = out.theory.epsilon;
    out.distinguisher.delta = config.delta;
    out.distinguisher.rho = config.rho;
    out.distinguisher.c_anti = config.c_anti;
    out.distinguisher.shatter_base = config.shatter_base;
    out.distinguisher.threshold_exponent = config.threshold_exponent;
    out.distinguisher.loop_cap = config.loop_cap;
    out.distinguisher.repetitions = config.repetitions;
    out.distinguisher_plan = plan_distinguisher(out.kikuchi, out.distinguisher);

    if (out.distinguisher_plan.floor_clamped) out.notes.push_back("shatter floor clamped to 1");
    if (out.distinguisher_plan.loop_capped) out.notes.push_back("partition loop bound S capped");
    return out;
}

json to_json(const ResolvedParams& p) {
    const auto& t = p.theory;
    std::ostringstream vertex_count;
    vertex_count << p.kikuchi.vertex_count;
    std::ostringstream average_degree;
    average_degree << p.kikuchi.average_degree;

    json doc = {
        {"epsilon", t.epsilon},
        {"T_theory", t.T},
        {"T_theory_real", t.T_real},
        {"N", vertex_count.str()},
        {"ln_N", p.kikuchi.ln_vertex_count},
        {"d_bar", p.kikuchi.d_bar()},
        {"d_bar_exact", average_degree.str()},
        {"density_Delta", p.kikuchi.density},
        {"asymptotic_degree", p.kikuchi.asymptotic_degree},
        {"feasible", p.feasible},
        {"notes", p.notes},
    };
    if (p.feasible) {
        doc["T"] = p.walk.T;
        doc["walk"] = {
            {"walks_per_attempt", p.walk_plan.walks_per_attempt},
            {"iterations", p.walk_plan.iterations},
            {"target_covers", p.walk_plan.target_covers},
            {"beta", p.walk.beta},
            {"required_degree", p.walk_plan.required_degree},
            {"degree_precondition", p.walk_plan.degree_precondition},
        };
        const auto& d = p.distinguisher_plan;
        doc["distinguisher"] = {
            {"parts", d.parts},
            {"loop_bound", d.loop_bound},
            {"loop_capped", d.loop_capped},
            {"shatter_floor", d.shatter_floor},
            {"shatter_floor_raw", d.shatter_floor_raw},
            {"floor_clamped", d.floor_clamped},
            {"threshold", d.threshold},
            {"required_covers", d.required_covers},
            {"c_anti", p.distinguisher.c_anti},
        };
    }
    return doc;
}

json check_feasibility(const ExperimentConfig& config) {
    config.validate();
    const std::size_t m = config.resolved_m();
    TheoryConfig theory;
    theory.c_anti = config.c_anti;
    theory.delta = config.delta;
    theory.epsilon = config.epsilon;
    theory.desk_T = config.T;
    const auto t = derive_theorem_params(config.n, config.k, m, config.ell, config.rho, theory);

    // T's dependence on the anticoncentration constant.
    json t_by_c_anti = json::object();
    for (double c : {1.5, 2.0, 4.0, 8.0}) {
        TheoryConfig alt = theory;
        alt.c_anti = c;
        const auto a = derive_theorem_params(config.n, config.k, m, config.ell, config.rho, alt);
        t_by_c_anti[format_double(c)] = a.T_real;
    }

    const double walk_gap = t.d_bar > 0.0 ? t.walk_degree_requirement / t.d_bar : HUGE_VAL;
    return {
        {"n", config.n},
        {"k", config.k},
        {"m", m},
        {"ell", config.ell},
        {"rho", config.rho},
        {"epsilon", t.epsilon},
        {"T", t.T},
        {"T_real", t.T_real},
        {"T_by_c_anti", t_by_c_anti},
        {"d_bar", t.d_bar},
        {"ln_N", t.ln_N},
        {"density", t.density},
        {"suggested_ell", optional_json(t.suggested_ell)},
        {"ell_within_sqrt_n", t.ell_within_sqrt_n},
        {"paper",
         {
             {"degree_requirement_log2", t.log2_degree_requirement},
             {"degree_gap_log10", t.log10_degree_gap},
             {"degree_ok", t.degree_ok},
             {"walk_degree_requirement", t.walk_degree_requirement},
             {"walk_degree_gap", walk_gap},
             {"walk_degree_ok", t.walk_degree_ok},
             {"delta_ok", t.delta_ok},
             {"walk_length_ok", t.walk_length_ok},
             {"feasible", t.paper_feasible},
         }},
        {"desk",
         {
             {"T", t.desk_T},
             {"feasible", t.desk_feasible},
         }},
    };
}

int ExperimentReport::exit_code() const {
    if (!feasible) return 2;
    if (harvest_failures > 0) return 3;
    return 0;
}

std::uint64_t trial_seed(std::uint64_t root, std::uint64_t trial) noexcept {
    return hash_combine(root, trial);
}

namespace {

TrialOutcome run_trial(const ExperimentConfig& config, const ResolvedParams& params,
                       const std::optional<Hypergraph>& fixed, std::size_t trial) {
    const auto trial_start = Clock::now();
    const std::uint64_t seed = trial_seed(config.seed, trial);
    TrialOutcome out;
    out.trial = trial;

    auto phase = Clock::now();
    RngStream graph_stream(seed, 1);
    const Hypergraph graph =
        fixed ? *fixed : sample_uniform_hypergraph(config.n, config.k, config.resolved_m(), graph_stream);
    std::vector<Sign> z(graph.n(), 1);
    if (config.random_z) {
        RngStream z_stream(seed, 2);
        for (auto& s : z) s = (z_stream() & 1u) ? Sign{1} : Sign{-1};
    }
    const SignedInstance null_instance = sample_null_signs(graph, RngStream(seed, 4));
    const SignedInstance planted_instance = sample_planted_signs(graph, z, config.rho, RngStream(seed, 5));
    out.generate_seconds = seconds_since(phase);

    phase = Clock::now();
    const KikuchiGraph kikuchi(graph, config.ell);
    std::vector<EvenCover> covers;
    try {
        auto harvest = harvest_distinct_covers(kikuchi, params.kikuchi, params.walk, RngStream(seed, 3));
        covers = std::move(harvest.covers);
        out.harvest_iterations = harvest.stats.iterations;
        out.harvest_ok = true;
    } catch (const InsufficientCovers& e) {
        out.harvest_iterations = e.partial().stats.iterations;
        out.covers_found = e.partial().covers.size();
    }
    out.harvest_seconds = seconds_since(phase);

    phase = Clock::now();
    if (out.harvest_ok) {
        out.covers_found = covers.size();
        const RngStream decide_stream(seed, 6);
        out.null_result =
            distinguish(covers, null_instance, params.distinguisher_plan, params.distinguisher, decide_stream);
        out.planted_result =
            distinguish(covers, planted_instance, params.distinguisher_plan, params.distinguisher, decide_stream);
    }
    out.distinguish_seconds = seconds_since(phase);
    out.seconds = seconds_since(trial_start);
    return out;
}

} // namespace

ExperimentReport run_experiment(const ExperimentConfig& input, const std::optional<Hypergraph>& fixed,
                                const TrialObserver& observer) {
    const auto wall_start = Clock::now();
    ExperimentConfig config = input;
    if (fixed) {
        config.n = fixed->n();
        config.k = fixed->k();
        config.m = fixed->m();
        config.density.reset();
    }

    auto phase = Clock::now();
    const ResolvedParams params = resolve_params(config);
    const double setup_seconds = seconds_since(phase);

    ExperimentReport report;
    report.feasible = params.feasible;
    report.detail = {
        {"schema", kReportSchema},
        {"config", to_json(config)},
        {"params", to_json(params)},
        {"fixed_hypergraph", fixed.has_value()},
    };

    phase = Clock::now();
    if (params.feasible && config.trials > 0) {
        report.trials.resize(config.trials);
        std::atomic<std::size_t> next{0};
        std::mutex observer_mutex;
        auto worker = [&] {
            for (std::size_t t = next++; t < config.trials; t = next++) {
                report.trials[t] = run_trial(config, params, fixed, t);
                if (observer) {
                    std::lock_guard lock(observer_mutex);
                    observer(report.trials[t]);
                }
            }
        };
        const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(config.workers, config.trials));
        std::vector<std::thread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
        for (auto& thread : pool) thread.join();
    }
    const double trial_seconds = seconds_since(phase);

    phase = Clock::now();
    json trials = json::array();
    std::size_t null_correct = 0, planted_correct = 0;
    std::ostringstream csv;
    csv << "trial,label,decision,statistic,threshold,covers_found,harvest_iters,seconds\n";
    for (const auto& t : report.trials) {
        if (!t.harvest_ok) ++report.harvest_failures;
        null_correct += t.null_result.decision == Decision::Null;
        planted_correct += t.planted_result.decision == Decision::Planted;
        trials.push_back({
            {"trial", t.trial},
            {"seed", trial_seed(config.seed, t.trial)},
            {"harvest_ok", t.harvest_ok},
            {"covers_found", t.covers_found},
            {"harvest_iterations", t.harvest_iterations},
            {"null", result_json(t.null_result)},
            {"planted", result_json(t.planted_result)},
            {"timing",
             {{"generate_s", t.generate_seconds},
              {"harvest_s", t.harvest_seconds},
              {"distinguish_s", t.distinguish_seconds},
              {"total_s", t.seconds}}},
        });
        for (const auto* label : {"null", "planted"}) {
            const auto& r = std::string(label) == "null" ? t.null_result : t.planted_result;
            csv << t.trial << ',' << label << ',' << to_string(r.decision) << ',' << format_double(r.statistic) << ','
                << format_double(r.threshold) << ',' << t.covers_found << ',' << t.harvest_iterations << ','
                << format_double(t.seconds) << '\n';
        }
    }
    report.correct = null_correct + planted_correct;
    report.decisions = 2 * report.trials.size();
    const double per_label = report.trials.empty() ? 0.0 : double(report.trials.size());
    report.detail["trials"] = std::move(trials);
    report.detail["summary"] = {
        {"trials", report.trials.size()},
        {"correct", report.correct},
        {"decisions", report.decisions},
        {"accuracy", report.accuracy()},
        {"null_accuracy", per_label > 0 ? double(null_correct) / per_label : 0.0},
        {"planted_accuracy", per_label > 0 ? double(planted_correct) / per_label : 0.0},
        {"harvest_failures", report.harvest_failures},
        {"exit_code", report.exit_code()},
    };
    report.csv = csv.str();
    const double aggregate_seconds = seconds_since(phase);
    report.detail["timing"] = {
        {"setup_s", setup_seconds},
        {"trials_s", trial_seconds},
        {"aggregate_s", aggregate_seconds},
        {"wall_s", seconds_since(wall_start)},
    };
    return report;
}

std::string deterministic_dump(const json& report) {
    json copy = report;
    strip_timing(copy);
    return copy.dump();
}

std::string report_digest(const json& report) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : deterministic_dump(report)) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
    return buffer;
}

CollisionRate measure_collision_rate(const Hypergraph& graph, std::uint32_t ell, const WalkSearchConfig& config,
                                     std::size_t starts, const RngStream& rng) {
    const KikuchiGraph kikuchi(graph, ell);
    const KikuchiParams params = compute_params(graph, ell);
    const WalkPlan plan = plan_walk_search(params, config);
    CollisionRate rate;
    rate.starts = starts;
    for (std::size_t s = 0; s < starts; ++s) {
        const RngStream attempt = rng.fork(s);
        RngStream start_stream = attempt.fork(0);
        const KikuchiVertex start = kikuchi.sample_stationary(start_stream);
        auto closed = find_good_closed_walk(kikuchi, params, start, config, plan.walks_per_attempt, attempt.fork(1));
        if (!closed) continue;
        ++rate.successes;
        if (!odd_colors(closed->walk).empty()) ++rate.nontrivial;
    }
    return rate;
}

std::optional<CalibrationPoint> calibrate_desk_point(const CalibrationSweep& sweep,
                                                     const std::function<void(const CalibrationPoint&)>& log) {
    for (std::uint32_t n : sweep.n_values) {
        for (std::uint32_t ell : sweep.ell_values) {
            if (ell < sweep.k / 2 || ell + sweep.k / 2 > n) continue;
            CalibrationPoint point;
            point.n = n;
            point.k = sweep.k;
            point.ell = ell;
            point.T = sweep.T;
            point.m = static_cast<std::size_t>(
                std::llround(sweep.edge_fraction * static_cast<double>(binomial(n, sweep.k))));

            RngStream graph_stream(sweep.seed, hash_combine(n, ell));
            const Hypergraph graph = sample_uniform_hypergraph(n, sweep.k, point.m, graph_stream);
            WalkSearchConfig walk;
            walk.profile = Profile::Desk;
            walk.T = sweep.T;
            walk.c1 = sweep.c1;
            walk.beta = sweep.beta;
            point.rate = measure_collision_rate(graph, ell, walk, sweep.starts,
                                                RngStream(sweep.seed, hash_combine(n, ell) + 1));
            if (log) log(point);
            if (point.rate.rate() >= sweep.required_rate) return point;
        }
    }
    return std::nullopt;
}

} // namespace kxor
