#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "kxor/hypergraph.hpp"
#include "kxor/instance.hpp"

namespace kxor::io {

using nlohmann::json;

json to_json(const Hypergraph& graph);
json to_json(const SignedInstance& instance);

struct LoadedHypergraph {
    Hypergraph graph;
    std::vector<std::size_t> order; // canonical position -> input position
    bool was_canonical;
};

/// Reads `{"n","k","edges"}` and normalizes to canonical form.
LoadedHypergraph hypergraph_from_json(const json& doc);

struct LoadedInstance {
    SignedInstance instance;
    bool was_canonical;
};

/// Reads a hypergraph plus `"signs"` and optional `"ground_truth"`; signs
/// follow their edges through normalization.
LoadedInstance instance_from_json(const json& doc);

struct CoverFile {
    std::vector<EvenCover> covers;
    std::size_t T = 0;
    std::uint64_t seed = 0;
};

json covers_to_json(std::span<const EvenCover> covers, std::size_t T, std::uint64_t seed);
CoverFile covers_from_json(const json& doc);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& doc);

} // namespace kxor::io
