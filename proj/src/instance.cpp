#include "kxor/instance.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "kxor/bigmath.hpp"
#include "kxor/errors.hpp"

namespace kxor {

const char* to_string(Label label) noexcept {
    return label == Label::Null ? "null" : "planted";
}

std::vector<Sign> sample_noise(std::size_t m, double rho, const RngStream& rng) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidInput("rho must lie in [0, 1]");
    const double plus = 0.5 * (1.0 + rho);
    std::vector<Sign> eta(m);
    for (std::size_t e = 0; e < m; ++e) eta[e] = RngStream::to_unit(rng.at(e)) < plus ? Sign{1} : Sign{-1};
    return eta;
}

std::vector<Sign> apply_assignment(const Hypergraph& graph, std::span<const Sign> eta, std::span<const Sign> z) {
    if (eta.size() != graph.m()) throw InvalidInput("noise vector length differs from m");
    if (z.size() != graph.n()) throw InvalidInput("assignment length differs from n");
    std::vector<Sign> signs(graph.m());
    for (std::size_t e = 0; e < graph.m(); ++e) {
        int product = eta[e];
        for (Vertex v : graph.edge(static_cast<EdgeIndex>(e))) product *= z[v];
        signs[e] = static_cast<Sign>(product);
    }
    return signs;
}

SignedInstance sample_planted_signs(const Hypergraph& graph, std::span<const Sign> z, double rho,
                                    const RngStream& rng) {
    if (z.size() != graph.n()) throw InvalidInput("assignment length differs from n");
    if (std::any_of(z.begin(), z.end(), [](Sign s) { return s != 1 && s != -1; }))
        throw InvalidInput("assignment entries must be +1 or -1");
    auto eta = sample_noise(graph.m(), rho, rng);
    auto signs = apply_assignment(graph, eta, z);
    return {graph, std::move(signs), GroundTruth{{z.begin(), z.end()}, rho, Label::Planted}};
}

SignedInstance sample_null_signs(const Hypergraph& graph, const RngStream& rng) {
    std::vector<Sign> ones(graph.n(), 1);
    auto instance = sample_planted_signs(graph, ones, 0.0, rng);
    instance.truth->label = Label::Null;
    return instance;
}

Hypergraph sample_uniform_hypergraph(std::uint32_t n, std::uint32_t k, std::size_t m, RngStream& rng) {
    if (k == 0 || k > n) throw InvalidInput("need 0 < k <= n");
    if (BigInt(m) > binomial(n, k))
        throw CapacityError("cannot place " + std::to_string(m) + " distinct edges on C(n, k) subsets");

    std::vector<Vertex> all(n);
    std::iota(all.begin(), all.end(), Vertex{0});
    std::set<VertexList> chosen;
    const std::size_t max_attempts = 100 * std::max<std::size_t>(m, 1);
    std::size_t attempts = 0;
    while (chosen.size() < m) {
        if (++attempts > max_attempts)
            throw CapacityError("rejection sampling exceeded " + std::to_string(max_attempts) + " attempts");
        VertexList edge;
        edge.reserve(k);
        std::sample(all.begin(), all.end(), std::back_inserter(edge), k, rng);
        chosen.insert(std::move(edge));
    }
    return Hypergraph(n, k, {chosen.begin(), chosen.end()});
}

int even_cover_sign_product(const SignedInstance& instance, std::span<const EdgeIndex> cover) {
    if (!verify_even_cover(instance.graph, cover)) throw InvalidInput("not an even cover");
    int product = 1;
    for (EdgeIndex e : cover) product *= instance.signs.at(e);
    return product;
}

} // namespace kxor
