// kxor: generate noisy kXOR instances, harvest even covers and run the
// distinguisher experiments.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kxor/errors.hpp"
#include "kxor/experiment.hpp"
#include "kxor/gf2.hpp"
#include "kxor/instance.hpp"
#include "kxor/io.hpp"
#include "kxor/kikuchi.hpp"
#include "kxor/oracle.hpp"

namespace {

using namespace kxor;
using nlohmann::json;

constexpr int kExitInfeasible = 2;
constexpr int kExitHarvestFailure = 3;
constexpr int kExitInvalidConfig = 4;
constexpr const char* kSeedVariable = "KXOR_SEED";

// Config-mirroring flags. A flag only overrides the config file when it was
// given on the command line.
class ConfigFlags {
public:
    void attach(CLI::App* app) {
        app->add_option("--config", config_path_, "experiment config JSON; flags override it");
        bind(app, "--n", n_, "number of variables", [this](auto& c) { c.n = n_; });
        bind(app, "--k", k_, "arity (even, >= 4)", [this](auto& c) { c.k = k_; });
        bind(app, "--m", m_, "number of constraints", [this](auto& c) { c.m = m_; c.density.reset(); });
        bind(app, "--density", density_, "m = density * n^{k/2} * log2 n",
             [this](auto& c) { c.density = density_; c.m.reset(); });
        bind(app, "--ell", ell_, "Kikuchi level", [this](auto& c) { c.ell = ell_; });
        bind(app, "--rho", rho_, "planted bias", [this](auto& c) { c.rho = rho_; });
        bind(app, "--epsilon", epsilon_, "override the derived epsilon", [this](auto& c) { c.epsilon = epsilon_; });
        bind(app, "--delta", delta_, "failure probability", [this](auto& c) { c.delta = delta_; });
        bind(app, "--profile", profile_, "paper or desk", [this](auto& c) {
            c.profile = profile_ == "paper" ? Profile::Paper : Profile::Desk;
        })->check(CLI::IsMember({"paper", "desk"}));
        bind(app, "--seed", seed_, "root seed (also " + std::string(kSeedVariable) + ")",
             [this](auto& c) { c.seed = seed_; });
        bind(app, "--trials", trials_, "number of paired trials", [this](auto& c) { c.trials = trials_; });
        bind(app, "--workers", workers_, "concurrent trials", [this](auto& c) { c.workers = workers_; });
        bind_flag(app, "--random-z", random_z_, "hidden assignment uniform instead of all ones",
                  [this](auto& c) { c.random_z = random_z_; });
        bind(app, "--c-anti", c_anti_, "anticoncentration constant", [this](auto& c) { c.c_anti = c_anti_; });
        bind(app, "--beta", beta_, "walk goodness parameter", [this](auto& c) { c.beta = beta_; });
        bind(app, "--T", T_, "walk length (desk)", [this](auto& c) { c.T = T_; });
        bind(app, "--c1", c1_, "walks per attempt = c1 * sqrt(N) (desk)", [this](auto& c) { c.c1 = c1_; });
        bind(app, "--walks-per-attempt", walks_, "walks per attempt (desk)",
             [this](auto& c) { c.walks_per_attempt = walks_; });
        bind(app, "--iterations", iterations_, "harvest iteration budget (desk)",
             [this](auto& c) { c.iterations = iterations_; });
        bind(app, "--target-covers", target_, "distinct covers to harvest (desk)",
             [this](auto& c) { c.target_covers = target_; });
        bind(app, "--shatter-base", shatter_base_, "shatter floor N^eps * base^T (desk)",
             [this](auto& c) { c.shatter_base = shatter_base_; });
        bind(app, "--threshold-exponent", threshold_exponent_, "threshold N^{x * eps} (desk)",
             [this](auto& c) { c.threshold_exponent = threshold_exponent_; });
        bind(app, "--loop-cap", loop_cap_, "cap on partition draws (desk)",
             [this](auto& c) { c.loop_cap = loop_cap_; });
        bind(app, "--repetitions", repetitions_, "majority-vote repetitions (desk)",
             [this](auto& c) { c.repetitions = repetitions_; });
    }

    ExperimentConfig resolve() const {
        ExperimentConfig config =
            config_path_.empty() ? ExperimentConfig{} : config_from_json(io::read_json_file(config_path_));
        if (const char* env = std::getenv(kSeedVariable)) {
            try {
                config.seed = std::stoull(env);
            } catch (const std::exception&) {
                throw InvalidInput(std::string(kSeedVariable) + " is not an unsigned integer");
            }
        }
        for (const auto& [option, apply] : bindings_)
            if (option->count() > 0) apply(config);
        return config;
    }

private:
    using Apply = std::function<void(ExperimentConfig&)>;

    template <typename T>
    CLI::Option* bind(CLI::App* app, const std::string& name, T& slot, const std::string& help, Apply apply) {
        CLI::Option* option = app->add_option(name, slot, help)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        bindings_.emplace_back(option, std::move(apply));
        return option;
    }

    CLI::Option* bind_flag(CLI::App* app, const std::string& name, bool& slot, const std::string& help, Apply apply) {
        CLI::Option* option = app->add_flag(name, slot, help);
        bindings_.emplace_back(option, std::move(apply));
        return option;
    }

    std::string config_path_;
    std::vector<std::pair<CLI::Option*, Apply>> bindings_;
    std::uint32_t n_ = 0, k_ = 0, ell_ = 0;
    std::size_t m_ = 0, trials_ = 0, T_ = 0;
    double density_ = 0, rho_ = 0, epsilon_ = 0, delta_ = 0, c_anti_ = 0, beta_ = 0, c1_ = 0;
    double shatter_base_ = 0, threshold_exponent_ = 0;
    std::string profile_;
    std::uint64_t seed_ = 0, walks_ = 0, iterations_ = 0, target_ = 0, loop_cap_ = 0;
    unsigned workers_ = 0, repetitions_ = 0;
    bool random_z_ = false;
};

void emit(const json& doc, const std::string& path) {
    if (path.empty())
        std::cout << doc.dump(2) << '\n';
    else
        io::write_json_file(path, doc);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write " + path);
    out << text;
}

std::vector<Sign> hidden_assignment(const ExperimentConfig& config) {
    std::vector<Sign> z(config.n, 1);
    if (config.random_z) {
        RngStream stream(config.seed, 2);
        for (auto& s : z) s = (stream() & 1u) ? Sign{1} : Sign{-1};
    }
    return z;
}

Hypergraph load_hypergraph(const std::string& path) {
    return io::hypergraph_from_json(io::read_json_file(path)).graph;
}

int cmd_gen(const ExperimentConfig& config, const std::string& label, const std::string& out) {
    config.validate();
    RngStream graph_stream(config.seed, 1);
    const Hypergraph graph = sample_uniform_hypergraph(config.n, config.k, config.resolved_m(), graph_stream);
    const SignedInstance instance = label == "null"
                                        ? sample_null_signs(graph, RngStream(config.seed, 4))
                                        : sample_planted_signs(graph, hidden_assignment(config), config.rho,
                                                               RngStream(config.seed, 5));
    emit(io::to_json(instance), out);
    return 0;
}

int cmd_harvest(ExperimentConfig config, const std::string& instance_path, const std::string& out,
                std::uint64_t progress_every) {
    const Hypergraph graph = load_hypergraph(instance_path);
    config.n = graph.n();
    config.k = graph.k();
    config.m = graph.m();
    const ResolvedParams params = resolve_params(config);
    if (!params.feasible) {
        std::cerr << "infeasible: " << to_json(params).dump() << '\n';
        return kExitInfeasible;
    }
    const KikuchiGraph kikuchi(graph, config.ell);
    auto report = [&](const HarvestEvent& event) {
        if (progress_every == 0 || event.iteration % progress_every != 0) return;
        const auto& s = event.stats;
        std::cerr << "iteration " << event.iteration << "/" << params.walk_plan.iterations << "  success rate "
                  << double(s.closed_walks) / double(event.iteration) << "  distinct covers "
                  << s.closed_walks - s.trivial - s.duplicates << '\n';
    };
    try {
        const auto result = harvest_distinct_covers(kikuchi, params.kikuchi, params.walk, RngStream(config.seed, 3), report);
        std::cerr << "harvested " << result.covers.size() << " covers in " << result.stats.iterations
                  << " iterations\n";
        emit(io::covers_to_json(result.covers, params.walk.T, config.seed), out);
        return 0;
    } catch (const InsufficientCovers& e) {
        const auto& partial = e.partial();
        std::cerr << e.what() << '\n';
        emit(io::covers_to_json(partial.covers, params.walk.T, config.seed), out);
        return kExitHarvestFailure;
    }
}

int cmd_distinguish(ExperimentConfig config, const std::string& instance_path, const std::string& covers_path,
                    const std::string& out) {
    const auto loaded = io::instance_from_json(io::read_json_file(instance_path));
    const auto& instance = loaded.instance;
    const auto covers = io::covers_from_json(io::read_json_file(covers_path));
    config.n = instance.graph.n();
    config.k = instance.graph.k();
    config.m = instance.graph.m();
    if (!config.T) config.T = covers.T;
    const ResolvedParams params = resolve_params(config);
    if (!params.feasible) {
        std::cerr << "infeasible: " << to_json(params).dump() << '\n';
        return kExitInfeasible;
    }
    for (const auto& cover : covers.covers)
        if (!verify_even_cover(instance.graph, cover)) throw InvalidInput("cover file holds a non-cover");
    const auto result = distinguish(covers.covers, instance, params.distinguisher_plan, params.distinguisher,
                                    RngStream(config.seed, 6));
    json doc = {
        {"decision", to_string(result.decision)},
        {"statistic", result.statistic},
        {"threshold", result.threshold},
        {"loop_iterations", result.loop_iterations},
        {"kept_covers", result.kept},
        {"planted_votes", result.planted_votes},
        {"repetitions", result.repetitions},
    };
    if (instance.truth) doc["label"] = to_string(instance.truth->label);
    emit(doc, out);
    return 0;
}

int cmd_run(const ExperimentConfig& config, const std::string& instance_path, const std::string& out,
            const std::string& csv_path, bool quiet) {
    std::optional<Hypergraph> fixed;
    if (!instance_path.empty()) fixed = load_hypergraph(instance_path);
    auto observer = [&](const TrialOutcome& t) {
        if (quiet) return;
        std::cerr << "trial " << t.trial << ": covers " << t.covers_found << (t.harvest_ok ? "" : " (harvest failed)")
                  << "  null->" << to_string(t.null_result.decision) << "  planted->"
                  << to_string(t.planted_result.decision) << "  " << t.seconds << " s\n";
    };
    const ExperimentReport report = run_experiment(config, fixed, observer);
    emit(report.detail, out);
    if (!csv_path.empty()) write_text(csv_path, report.csv);
    std::cerr << "accuracy " << report.accuracy() << " (" << report.correct << "/" << report.decisions
              << "), harvest failures " << report.harvest_failures << ", digest " << report_digest(report.detail)
              << '\n';
    return report.exit_code();
}

int cmd_feasibility(const ExperimentConfig& config, const std::string& out) {
    const json record = check_feasibility(config);
    emit(record, out);
    const bool ok = config.profile == Profile::Paper ? record["paper"]["feasible"].get<bool>()
                                                     : record["desk"]["feasible"].get<bool>();
    return ok ? 0 : kExitInfeasible;
}

int cmd_oracle(const ExperimentConfig& config, const std::string& instance_path, std::size_t samples,
               std::size_t max_length) {
    Hypergraph graph = [&] {
        if (!instance_path.empty()) return load_hypergraph(instance_path);
        config.validate();
        RngStream stream(config.seed, 1);
        return sample_uniform_hypergraph(config.n, config.k, config.resolved_m(), stream);
    }();
    oracle::SuiteOptions options;
    options.stationary_samples = samples;
    options.max_walk_length = max_length;
    bool ok = true;
    for (const auto& check : oracle::run_oracle_suite(graph, config.ell, options, RngStream(config.seed, 7))) {
        ok = ok && check.pass;
        std::cout << (check.skipped ? "SKIP" : check.pass ? "PASS" : "FAIL") << "  " << check.name << "  "
                  << check.detail << '\n';
    }

    // Harvested covers against the nullspace, when a desk harvest is possible.
    if (graph.m() > 0 && config.T.value_or(2) >= 2) {
        WalkSearchConfig walk;
        walk.profile = Profile::Desk;
        walk.T = config.T.value_or(2);
        walk.c1 = config.c1;
        walk.beta = config.beta;
        walk.iterations = config.iterations.value_or(200);
        walk.target_covers = config.target_covers.value_or(1);
        const KikuchiGraph kikuchi(graph, config.ell);
        const NullspaceBasis basis = gf2_nullspace_basis(graph);
        std::size_t checked = 0;
        bool sound = true;
        try {
            const auto result =
                harvest_distinct_covers(kikuchi, compute_params(graph, config.ell), walk, RngStream(config.seed, 3));
            for (const auto& cover : result.covers) {
                ++checked;
                sound = sound && verify_even_cover(graph, cover) && oracle::parity_cancels(graph, cover) &&
                        basis.contains(cover);
            }
        } catch (const InsufficientCovers& e) {
            for (const auto& cover : e.partial().covers) {
                ++checked;
                sound = sound && verify_even_cover(graph, cover) && basis.contains(cover);
            }
        }
        ok = ok && sound;
        std::cout << (sound ? "PASS" : "FAIL") << "  cover_soundness  " << checked << " harvested covers, nullspace dim "
                  << basis.dimension() << '\n';
    }
    return ok ? 0 : 1;
}

int cmd_calibrate(CalibrationSweep sweep, const std::string& out) {
    auto log = [](const CalibrationPoint& p) {
        std::cerr << "n=" << p.n << " ell=" << p.ell << " m=" << p.m << " T=" << p.T << "  success "
                  << p.rate.successes << "/" << p.rate.starts << " (nontrivial " << p.rate.nontrivial << ")\n";
    };
    const auto point = calibrate_desk_point(sweep, log);
    if (!point) {
        std::cerr << "no sweep point reached the required rate\n";
        return kExitInfeasible;
    }
    emit({{"n", point->n},
          {"k", point->k},
          {"ell", point->ell},
          {"m", point->m},
          {"T", point->T},
          {"c1", sweep.c1},
          {"beta", sweep.beta},
          {"starts", point->rate.starts},
          {"successes", point->rate.successes},
          {"rate", point->rate.rate()},
          {"seed", sweep.seed}},
         out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Noisy planted kXOR distinguisher via Kikuchi-graph walk collisions"};
    app.require_subcommand(1);

    std::string out, instance_path, covers_path, csv_path, label = "planted";
    std::uint64_t progress_every = 0;
    bool quiet = false;
    std::size_t samples = 100000, max_length = 4;

    ConfigFlags gen_flags, harvest_flags, distinguish_flags, run_flags, feasibility_flags, oracle_flags;

    auto* gen = app.add_subcommand("gen", "sample a hypergraph and signs, write the instance JSON");
    gen_flags.attach(gen);
    gen->add_option("--label", label, "null or planted")->check(CLI::IsMember({"null", "planted"}));
    gen->add_option("-o,--out", out, "output path (stdout if omitted)");

    auto* harvest = app.add_subcommand("harvest", "collect distinct even covers of an instance's hypergraph");
    harvest_flags.attach(harvest);
    harvest->add_option("-i,--instance", instance_path, "hypergraph or instance JSON")->required();
    harvest->add_option("-o,--out", out, "covers JSON path (stdout if omitted)");
    harvest->add_option("--progress", progress_every, "report every this many iterations");

    auto* dist = app.add_subcommand("distinguish", "decide Null or Planted from an instance and its covers");
    distinguish_flags.attach(dist);
    dist->add_option("-i,--instance", instance_path, "instance JSON with signs")->required();
    dist->add_option("-c,--covers", covers_path, "covers JSON")->required();
    dist->add_option("-o,--out", out, "result path (stdout if omitted)");

    auto* run = app.add_subcommand("run", "paired Null/Planted trials with a JSON report");
    run_flags.attach(run);
    run->add_option("-i,--instance", instance_path, "reuse this hypergraph in every trial");
    run->add_option("-o,--out", out, "JSON report path (stdout if omitted)");
    run->add_option("--csv", csv_path, "CSV summary path");
    run->add_flag("-q,--quiet", quiet, "no per-trial progress");

    auto* feasibility = app.add_subcommand("feasibility", "evaluate the parameter preconditions");
    feasibility_flags.attach(feasibility);
    feasibility->add_option("-o,--out", out, "output path (stdout if omitted)");

    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force cross-checks on a small instance");
    oracle_flags.attach(oracle_cmd);
    oracle_cmd->add_option("-i,--instance", instance_path, "hypergraph JSON (sampled if omitted)");
    oracle_cmd->add_option("--samples", samples, "stationary sampler draws");
    oracle_cmd->add_option("--max-length", max_length, "longest closed walk enumerated (<= 6)");

    CalibrationSweep sweep;
    std::uint32_t n_min = 20, n_max = 40;
    auto* calibrate = app.add_subcommand("calibrate", "find a desk point where the collision search succeeds");
    calibrate->add_option("--n-min", n_min);
    calibrate->add_option("--n-max", n_max);
    calibrate->add_option("--ell", sweep.ell_values, "levels to try");
    calibrate->add_option("--k", sweep.k);
    calibrate->add_option("--edge-fraction", sweep.edge_fraction, "m = fraction * C(n, k)");
    calibrate->add_option("--T", sweep.T);
    calibrate->add_option("--c1", sweep.c1);
    calibrate->add_option("--beta", sweep.beta);
    calibrate->add_option("--starts", sweep.starts);
    calibrate->add_option("--required-rate", sweep.required_rate);
    calibrate->add_option("--seed", sweep.seed);
    calibrate->add_option("-o,--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalidConfig;
    }

    try {
        if (*gen) return cmd_gen(gen_flags.resolve(), label, out);
        if (*harvest) return cmd_harvest(harvest_flags.resolve(), instance_path, out, progress_every);
        if (*dist) return cmd_distinguish(distinguish_flags.resolve(), instance_path, covers_path, out);
        if (*run) return cmd_run(run_flags.resolve(), instance_path, out, csv_path, quiet);
        if (*feasibility) return cmd_feasibility(feasibility_flags.resolve(), out);
        if (*oracle_cmd) return cmd_oracle(oracle_flags.resolve(), instance_path, samples, max_length);
        if (*calibrate) {
            for (std::uint32_t n = n_min; n <= n_max; ++n) sweep.n_values.push_back(n);
            return cmd_calibrate(sweep, out);
        }
    } catch (const InvalidInput& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return kExitInvalidConfig;
    } catch (const CapacityError& e) {
        std::cerr << "capacity: " << e.what() << '\n';
        return kExitInvalidConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
