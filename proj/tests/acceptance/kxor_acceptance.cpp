// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Usage: kxor_acceptance <manifest.json> [criterion ...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "kxor/distinguisher.hpp"
#include "kxor/errors.hpp"
#include "kxor/experiment.hpp"
#include "kxor/gf2.hpp"
#include "kxor/instance.hpp"
#include "kxor/kikuchi.hpp"
#include "kxor/oracle.hpp"
#include "kxor/walk.hpp"

using namespace kxor;
using nlohmann::json;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string format(const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Parity of every vertex, counted with a std::map.
bool cancels(const Hypergraph& graph, const EdgeSet& edges) {
    std::map<Vertex, int> count;
    for (EdgeIndex e : edges)
        for (Vertex v : graph.edge(e)) ++count[v];
    for (const auto& [v, c] : count)
        if (c % 2) return false;
    return !edges.empty();
}

Hypergraph random_instance(const json& spec, std::uint64_t seed, std::uint64_t index) {
    RngStream rng(seed, index);
    return sample_uniform_hypergraph(spec.at("n"), spec.at("k"), spec.at("m"), rng);
}

ExperimentConfig frozen_config(const json& manifest) {
    const json& f = manifest.at("frozen_point");
    ExperimentConfig c;
    c.profile = Profile::Desk;
    c.n = f.at("n");
    c.k = f.at("k");
    c.ell = f.at("ell");
    c.m = f.at("m").get<std::size_t>();
    c.T = f.at("T").get<std::size_t>();
    c.c1 = f.at("c1");
    c.beta = f.at("beta");
    c.rho = f.at("rho");
    c.epsilon = f.at("epsilon").get<double>();
    c.target_covers = f.at("target_covers").get<std::uint64_t>();
    c.iterations = f.at("iterations").get<std::uint64_t>();
    c.shatter_base = f.at("shatter_base");
    c.threshold_exponent = f.at("threshold_exponent");
    return c;
}

WalkSearchConfig frozen_walk(const json& manifest) {
    const json& f = manifest.at("frozen_point");
    WalkSearchConfig w;
    w.profile = Profile::Desk;
    w.T = f.at("T");
    w.c1 = f.at("c1");
    w.beta = f.at("beta");
    return w;
}

Outcome soundness(const json& manifest) {
    const json& s = manifest.at("soundness");
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t instances = 0, closed = 0, nonempty = 0, failures = 0;
    std::uint64_t index = 0;
    for (const json& spec : s.at("instances")) {
        for (int c = 0; c < spec.at("count").get<int>(); ++c, ++index) {
            const Hypergraph graph = random_instance(spec, s.at("seed"), index);
            const NullspaceBasis basis = gf2_nullspace_basis(graph);
            const KikuchiGraph kikuchi(graph, spec.at("ell"));
            const KikuchiParams params = compute_params(graph, spec.at("ell"));
            WalkSearchConfig walk;
            walk.profile = Profile::Desk;
            walk.T = spec.at("T");
            walk.c1 = spec.at("c1");
            walk.iterations = s.at("iterations").get<std::uint64_t>();
            walk.target_covers = s.at("target_covers").get<std::uint64_t>();
            auto observe = [&](const HarvestEvent& event) {
                if (!event.closed) return;
                ++closed;
                const EdgeSet odd = odd_colors(event.closed->walk);
                if (odd.empty()) return;
                ++nonempty;
                if (!verify_even_cover(graph, odd) || !basis.contains(odd) || !cancels(graph, odd)) ++failures;
            };
            try {
                harvest_distinct_covers(kikuchi, params, walk, RngStream(s.at("seed"), 1000 + index), observe);
            } catch (const InsufficientCovers&) {
                // The walks seen so far still count.
            }
            ++instances;
        }
    }
    const double elapsed = seconds_since(t0);
    const bool pass = failures == 0 && instances >= s.at("min_instances").get<std::size_t>() &&
                      nonempty >= s.at("min_walks").get<std::size_t>() && elapsed < s.at("budget_s").get<double>();
    return {pass, format("%zu instances, %zu closed walks, %zu nonempty, %zu unsound, %.1f s", instances, closed,
                         nonempty, failures, elapsed)};
}

std::vector<std::pair<Hypergraph, std::uint32_t>> materialized_instances(const json& manifest) {
    const json& s = manifest.at("materialized");
    std::vector<std::pair<Hypergraph, std::uint32_t>> out;
    std::uint64_t index = 0;
    for (const json& spec : s.at("instances"))
        out.emplace_back(random_instance(spec, s.at("seed"), index++), spec.at("ell").get<std::uint32_t>());
    return out;
}

Outcome kikuchi_equivalence(const json& manifest) {
    const json& s = manifest.at("materialized");
    oracle::SuiteOptions options;
    options.stationary_samples = s.at("samples");
    options.tv_tolerance = s.at("tv_tolerance");
    options.max_walk_length = s.at("max_walk_length");
    options.per_start_cap = s.at("per_start_cap");
    const std::set<std::string> required{"degree", "neighbors", "average_degree", "stationary_tv"};
    std::set<std::uint32_t> ks, ells;
    std::size_t count = 0, failed = 0;
    std::string first_failure;
    std::uint64_t index = 0;
    for (const auto& [graph, ell] : materialized_instances(manifest)) {
        if (binomial(graph.n(), ell) > kMaterializeLimit) return {false, "instance exceeds materialization limit"};
        ks.insert(graph.k());
        ells.insert(ell);
        ++count;
        std::set<std::string> seen;
        for (const auto& check : oracle::run_oracle_suite(graph, ell, options, RngStream(s.at("seed"), 500 + index))) {
            if (check.name == "min_degree") continue;
            seen.insert(check.name);
            if (!check.pass || (required.count(check.name) && check.skipped)) {
                ++failed;
                if (first_failure.empty()) first_failure = check.name + ": " + check.detail;
            }
        }
        if (seen != std::set<std::string>{"degree", "neighbors", "average_degree", "stationary_tv", "closed_walks"}) {
            ++failed;
            if (first_failure.empty()) first_failure = "missing checks";
        }
        ++index;
    }
    const bool span = ks == std::set<std::uint32_t>{4, 6} && ells.count(2) && ells.count(3) && ells.count(4);
    const bool pass = failed == 0 && count >= 10 && span;
    return {pass, format("%zu instances, %zu failed checks%s%s", count, failed, first_failure.empty() ? "" : ", ",
                         first_failure.c_str())};
}

// Three-edge and four-edge covers with no smaller cover inside.
Hypergraph sign_fixture() {
    return Hypergraph(8, 4, {{0, 1, 2, 3}, {0, 1, 4, 5}, {2, 3, 4, 5},
                             {0, 2, 4, 6}, {0, 2, 5, 7}, {1, 3, 4, 6}, {1, 3, 5, 7}});
}

Outcome sign_statistics(const json& manifest) {
    const json& s = manifest.at("sign_statistics");
    const Hypergraph graph = sign_fixture();
    const std::vector<EdgeSet> covers{{0, 1, 2}, {3, 4, 5, 6}};
    for (const auto& F : covers)
        if (!cancels(graph, F)) return {false, "fixture is not a cover"};
    const std::size_t samples = s.at("samples");
    const double sigmas = s.at("sigmas");
    const RngStream root(s.at("seed"), 3);

    auto product = [](const std::vector<Sign>& signs, const EdgeSet& F) {
        int p = 1;
        for (EdgeIndex e : F) p *= signs[e];
        return p;
    };
    auto gate = [&](const std::vector<double>& values, double expected, std::string& worst) {
        const auto test = oracle::EmpiricalTest::of_mean(values, expected);
        const double z = test.sigma > 0 ? std::abs(test.statistic - expected) / test.sigma : 0.0;
        worst += format(" %.4f/%.4f", test.statistic, expected);
        return z <= sigmas;
    };

    bool pass = true;
    std::string detail;
    std::uint64_t stream = 0;
    {
        std::vector<std::vector<double>> values(covers.size());
        const RngStream null_root = root.fork(stream++);
        for (std::size_t r = 0; r < samples; ++r) {
            const auto instance = sample_null_signs(graph, null_root.fork(r));
            for (std::size_t i = 0; i < covers.size(); ++i) values[i].push_back(product(instance.signs, covers[i]));
        }
        detail += "null";
        for (std::size_t i = 0; i < covers.size(); ++i) pass = gate(values[i], 0.0, detail) && pass;
    }
    for (double rho : s.at("rhos").get<std::vector<double>>()) {
        std::vector<std::vector<double>> values(covers.size());
        const RngStream planted_root = root.fork(stream++);
        for (std::size_t r = 0; r < samples; ++r) {
            RngStream z_stream = planted_root.fork(2 * r);
            std::vector<Sign> z(graph.n());
            for (auto& v : z) v = z_stream.below(2) ? 1 : -1;
            const auto instance = sample_planted_signs(graph, z, rho, planted_root.fork(2 * r + 1));
            for (std::size_t i = 0; i < covers.size(); ++i) values[i].push_back(product(instance.signs, covers[i]));
        }
        detail += format("; rho=%.1f", rho);
        for (std::size_t i = 0; i < covers.size(); ++i)
            pass = gate(values[i], std::pow(rho, double(covers[i].size())), detail) && pass;
    }
    return {pass, detail};
}

Outcome noised_means(const json& manifest) {
    const json& s = manifest.at("noised_means");
    const ExperimentConfig config = frozen_config(manifest);
    const Hypergraph graph = random_instance(manifest.at("frozen_point"), s.at("seed"), 0);
    const KikuchiGraph kikuchi(graph, config.ell);
    const KikuchiParams params = compute_params(graph, config.ell);
    WalkSearchConfig walk = frozen_walk(manifest);
    walk.target_covers = s.at("covers").get<std::uint64_t>();
    walk.iterations = config.iterations;
    const auto harvest = harvest_distinct_covers(kikuchi, params, walk, RngStream(s.at("seed"), 1));
    const auto& covers = harvest.covers;
    const std::size_t samples = s.at("samples");
    const double sigmas = s.at("sigmas");

    bool pass = true;
    std::string detail = format("%zu covers;", covers.size());
    auto gate = [&](const char* label, const std::vector<double>& values, double expected) {
        const auto test = oracle::EmpiricalTest::of_mean(values, expected);
        const bool ok = std::abs(test.statistic - expected) <= sigmas * test.sigma;
        detail += format(" %s %.3f/%.3f (sd %.3f)", label, test.statistic, expected, test.sigma);
        pass = ok && pass;
    };

    const RngStream root(s.at("seed"), 4);
    std::vector<double> null_values;
    for (std::size_t r = 0; r < samples; ++r) {
        const RngStream trial = root.fork(r);
        const auto instance = sample_null_signs(graph, trial.fork(0));
        null_values.push_back(evaluate_noised_polynomial(covers, instance.signs, trial.fork(1)));
    }
    gate("null", null_values, 0.0);

    std::uint64_t stream = 1;
    for (double rho : s.at("rhos").get<std::vector<double>>()) {
        double expected = 0.0;
        for (const auto& c : covers) expected += std::pow(rho / 2.0, double(c.size()));
        const RngStream planted_root(s.at("seed"), 40 + stream++);
        std::vector<double> values;
        for (std::size_t r = 0; r < samples; ++r) {
            const RngStream trial = planted_root.fork(r);
            RngStream z_stream = trial.fork(0);
            std::vector<Sign> z(graph.n());
            for (auto& v : z) v = z_stream.below(2) ? 1 : -1;
            const auto instance = sample_planted_signs(graph, z, rho, trial.fork(1));
            values.push_back(evaluate_noised_polynomial(covers, instance.signs, trial.fork(2)));
        }
        gate(format("rho=%.1f", rho).c_str(), values, expected);
    }
    return {pass, detail};
}

Outcome collision(const json& manifest) {
    const json& s = manifest.at("collision");
    const json& frozen = manifest.at("frozen_point");
    const auto t0 = std::chrono::steady_clock::now();

    CalibrationSweep sweep;
    for (std::uint32_t n = s.at("sweep_n_min"); n <= s.at("sweep_n_max").get<std::uint32_t>(); ++n)
        sweep.n_values.push_back(n);
    sweep.ell_values = s.at("sweep_ells").get<std::vector<std::uint32_t>>();
    sweep.k = frozen.at("k");
    sweep.edge_fraction = s.at("edge_fraction");
    sweep.T = frozen.at("T");
    sweep.c1 = frozen.at("c1");
    sweep.beta = frozen.at("beta");
    sweep.starts = s.at("starts");
    sweep.required_rate = s.at("required_rate");
    sweep.seed = s.at("sweep_seed");
    const auto point = calibrate_desk_point(sweep);
    if (!point) return {false, "calibration sweep found no point"};
    if (point->n != frozen.at("n") || point->ell != frozen.at("ell") || point->m != frozen.at("m"))
        return {false, format("sweep froze n=%u ell=%u m=%zu, manifest differs", point->n, point->ell, point->m)};

    const WalkSearchConfig walk = frozen_walk(manifest);
    std::size_t starts = 0, successes = 0;
    for (std::uint64_t seed : s.at("fresh_seeds").get<std::vector<std::uint64_t>>()) {
        const Hypergraph graph = random_instance(frozen, seed, 0);
        const auto rate = measure_collision_rate(graph, frozen.at("ell"), walk, s.at("starts"), RngStream(seed, 1));
        starts += rate.starts;
        successes += rate.successes;
    }
    const double lower = oracle::binomial_lower_bound(successes, starts, s.at("confidence"));
    const double elapsed = seconds_since(t0);
    const bool pass = lower >= s.at("min_rate").get<double>() && elapsed < s.at("budget_s").get<double>();
    return {pass, format("frozen n=%u ell=%u (sweep rate %.3f); fresh %zu/%zu, lower bound %.3f, %.1f s", point->n,
                         point->ell, point->rate.rate(), successes, starts, lower, elapsed)};
}

Outcome end_to_end(const json& manifest) {
    const json& s = manifest.at("end_to_end");
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig config = frozen_config(manifest);
    config.seed = s.at("seed");
    config.trials = s.at("trials");
    const auto report = run_experiment(config);
    const double lower = oracle::binomial_lower_bound(report.correct, report.decisions, s.at("confidence"));
    const double elapsed = seconds_since(t0);
    const bool pass = report.decisions == 2 * config.trials && report.accuracy() >= s.at("min_accuracy").get<double>() &&
                      lower >= s.at("gate").get<double>() && elapsed < s.at("budget_s").get<double>();
    return {pass, format("%zu/%zu correct (%.3f), lower bound %.3f, harvest failures %zu, %.1f s", report.correct,
                         report.decisions, report.accuracy(), lower, report.harvest_failures, elapsed)};
}

Outcome shattering(const json& manifest) {
    const json& s = manifest.at("shattering");
    const std::size_t m = s.at("m");
    const std::size_t samples = s.at("samples");
    const double sigmas = s.at("sigmas");
    bool pass = true;
    std::string detail;
    for (std::uint32_t T : s.at("Ts").get<std::vector<std::uint32_t>>()) {
        EdgeSet monomial(T);
        for (std::uint32_t i = 0; i < T; ++i) monomial[i] = i * (m / T) / 2 + i;
        RngStream rng(s.at("seed"), T);
        std::uint64_t hits = 0;
        for (std::size_t r = 0; r < samples; ++r) {
            const BlockPartition partition = sample_equipartition(m, T, rng);
            std::set<std::uint32_t> parts;
            for (EdgeIndex e : monomial) parts.insert(partition.part_of[e]);
            hits += parts.size() == T;
        }
        const double bound = 2.0 * std::exp(-double(T));
        const double sigma = std::sqrt(bound * (1.0 - bound) / double(samples));
        const double freq = double(hits) / double(samples);
        pass = freq >= bound - sigmas * sigma && pass;
        detail += format("%sT=%u %.5f >= %.5f", detail.empty() ? "" : "; ", T, freq, bound);
    }
    return {pass, detail};
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Outcome determinism(const json& manifest) {
    const json& s = manifest.at("determinism");
    ExperimentConfig config = frozen_config(manifest);
    config.seed = s.at("seed");
    config.trials = s.at("trials");
    config.workers = s.at("workers");

    const auto dir = std::filesystem::temp_directory_path() / format("kxor-acceptance-%d", int(::getpid()));
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "config.json") << to_json(config).dump(2);
    std::vector<std::string> dumps, digests;
    for (int run = 0; run < 2; ++run) {
        const auto out = dir / format("report%d.json", run);
        const std::string cmd = format("\"%s\" run --config \"%s\" -o \"%s\" -q", KXOR_CLI_PATH,
                                       (dir / "config.json").c_str(), out.c_str());
        const int status = std::system(cmd.c_str());
        if (status != 0) {
            std::filesystem::remove_all(dir);
            return {false, format("run exited with status %d", status)};
        }
        const json report = json::parse(read_file(out));
        dumps.push_back(deterministic_dump(report));
        digests.push_back(report_digest(report));
    }
    std::filesystem::remove_all(dir);
    const bool pass = dumps[0] == dumps[1] && digests[0] == digests[1];
    return {pass, format("digests %s %s, %zu bytes", digests[0].c_str(), digests[1].c_str(), dumps[0].size())};
}

Outcome min_degree(const json& manifest) {
    const json& s = manifest.at("materialized");
    std::vector<Rational> betas;
    for (const auto& b : s.at("betas")) betas.emplace_back(b.at(0).get<int>(), b.at(1).get<int>());
    std::size_t checks = 0, failed = 0;
    double worst = 0.0;
    for (const auto& [graph, ell] : materialized_instances(manifest)) {
        const MaterializedKikuchi kikuchi = materialize_kikuchi(graph, ell);
        if (kikuchi.edge_count == 0) return {false, "edgeless instance in manifest"};
        // Independent of low_degree_mass: weight deg(v) on vertices below beta * dbar.
        const Rational dbar(BigInt(2 * kikuchi.edge_count), BigInt(kikuchi.vertices.size()));
        for (const Rational& beta : betas) {
            BigInt low = 0;
            for (std::size_t v = 0; v < kikuchi.vertices.size(); ++v)
                if (Rational(kikuchi.degree(v)) < beta * dbar) low += kikuchi.degree(v);
            const Rational mass(low, BigInt(2 * kikuchi.edge_count));
            ++checks;
            if (!(mass < beta) || mass != oracle::low_degree_mass(kikuchi, beta)) ++failed;
            worst = std::max(worst, to_double(mass / beta));
        }
    }
    return {failed == 0, format("%zu checks, %zu failed, max mass/beta %.4f", checks, failed, worst)};
}

Outcome feasibility(const json& manifest) {
    const json& s = manifest.at("feasibility");
    const json& e = s.at("epsilon_case");
    const TheoryConfig theory;
    const auto params = derive_theorem_params(e.at("n"), e.at("k"), e.at("m"), e.at("ell"), e.at("rho"), theory);
    bool pass = params.epsilon == e.at("epsilon").get<double>();
    std::string detail = format("epsilon %.17g", params.epsilon);
    for (const json& c : s.at("clamp_cases")) {
        const std::uint32_t k = c.at("k");
        const auto p = derive_theorem_params(c.at("n"), k, c.at("m"), c.at("ell"), 1.0, theory);
        const bool ok = p.suggested_ell && *p.suggested_ell == k;
        pass = ok && pass;
        detail += format("; k=%u ell %s", k, p.suggested_ell ? std::to_string(*p.suggested_ell).c_str() : "none");
    }
    return {pass, detail};
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s manifest.json [criterion ...]\n", argv[0]);
        return 2;
    }
    const json manifest = json::parse(read_file(argv[1]));
    std::set<int> only;
    for (int i = 2; i < argc; ++i) only.insert(std::atoi(argv[i]));

    const std::vector<std::pair<const char*, std::function<Outcome(const json&)>>> criteria{
        {"even-cover soundness", soundness},
        {"kikuchi oracle equivalence", kikuchi_equivalence},
        {"sign statistics", sign_statistics},
        {"noised means", noised_means},
        {"birthday collision rate", collision},
        {"end-to-end accuracy", end_to_end},
        {"shattering rate", shattering},
        {"determinism", determinism},
        {"min-degree fact", min_degree},
        {"feasibility calculator", feasibility},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = int(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        Outcome outcome;
        try {
            outcome = criteria[i].second(manifest);
        } catch (const std::exception& ex) {
            outcome = {false, std::string("exception: ") + ex.what()};
        }
        failures += !outcome.pass;
        std::printf("%s %2d %s: %s\n", outcome.pass ? "PASS" : "FAIL", id, criteria[i].first, outcome.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
