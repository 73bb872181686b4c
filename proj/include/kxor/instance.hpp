#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "kxor/hypergraph.hpp"
#include "kxor/rng.hpp"

namespace kxor {

using Sign = std::int8_t;

enum class Label { Null, Planted };

struct GroundTruth {
    std::vector<Sign> z;
    double rho = 0.0;
    Label label = Label::Null;
};

/// A hypergraph together with one right-hand side b_e in {+1, -1} per edge.
struct SignedInstance {
    Hypergraph graph;
    std::vector<Sign> signs;
    std::optional<GroundTruth> truth;
};

/// Noise bits eta_e with E[eta_e] = rho. Edge e's bit depends only on
/// (rng key, e).
std::vector<Sign> sample_noise(std::size_t m, double rho, const RngStream& rng);

/// b_e = eta_e * prod_{v in e} z_v.
std::vector<Sign> apply_assignment(const Hypergraph& graph, std::span<const Sign> eta,
                                   std::span<const Sign> z);

SignedInstance sample_planted_signs(const Hypergraph& graph, std::span<const Sign> z, double rho,
                                    const RngStream& rng);

SignedInstance sample_null_signs(const Hypergraph& graph, const RngStream& rng);

/// m distinct k-subsets of [0, n), uniformly without replacement, returned in
/// canonical (sorted) order.
Hypergraph sample_uniform_hypergraph(std::uint32_t n, std::uint32_t k, std::size_t m, RngStream& rng);

/// prod_{e in cover} b_e. Throws InvalidInput if `cover` is not an even cover.
int even_cover_sign_product(const SignedInstance& instance, std::span<const EdgeIndex> cover);

const char* to_string(Label label) noexcept;

} // namespace kxor
