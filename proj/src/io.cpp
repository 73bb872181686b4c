#include "kxor/io.hpp"

#include <fstream>

#include "kxor/errors.hpp"

namespace kxor::io {

namespace {

const json& require(const json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) throw InvalidInput(std::string("missing field \"") + key + "\"");
    return doc.at(key);
}

std::vector<Sign> read_signs(const json& array, const char* what) {
    if (!array.is_array()) throw InvalidInput(std::string(what) + " must be an array");
    std::vector<Sign> out;
    out.reserve(array.size());
    for (const auto& v : array) {
        const int s = v.get<int>();
        if (s != 1 && s != -1) throw InvalidInput(std::string(what) + " entries must be +1 or -1");
        out.push_back(static_cast<Sign>(s));
    }
    return out;
}

} // namespace

json to_json(const Hypergraph& graph) {
    return {{"n", graph.n()}, {"k", graph.k()}, {"edges", graph.edges()}};
}

json to_json(const SignedInstance& instance) {
    json doc = to_json(instance.graph);
    doc["signs"] = std::vector<int>(instance.signs.begin(), instance.signs.end());
    if (instance.truth) {
        doc["ground_truth"] = {
            {"z", std::vector<int>(instance.truth->z.begin(), instance.truth->z.end())},
            {"rho", instance.truth->rho},
            {"label", to_string(instance.truth->label)},
        };
    }
    return doc;
}

LoadedHypergraph hypergraph_from_json(const json& doc) {
    try {
        const auto n = require(doc, "n").get<std::uint32_t>();
        const auto k = require(doc, "k").get<std::uint32_t>();
        auto edges = require(doc, "edges").get<std::vector<VertexList>>();
        auto form = canonicalize(n, k, std::move(edges));
        return {std::move(form.graph), std::move(form.order), form.was_canonical};
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed hypergraph JSON: ") + e.what());
    }
}

LoadedInstance instance_from_json(const json& doc) {
    auto loaded = hypergraph_from_json(doc);
    std::vector<Sign> raw;
    try {
        raw = read_signs(require(doc, "signs"), "signs");
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed signs: ") + e.what());
    }
    if (raw.size() != loaded.graph.m()) throw InvalidInput("signs length differs from the edge count");
    std::vector<Sign> signs(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) signs[i] = raw[loaded.order[i]];

    std::optional<GroundTruth> truth;
    if (doc.contains("ground_truth")) {
        const auto& gt = doc.at("ground_truth");
        try {
            GroundTruth t;
            t.z = read_signs(require(gt, "z"), "ground_truth.z");
            t.rho = require(gt, "rho").get<double>();
            const auto label = require(gt, "label").get<std::string>();
            if (label == "null")
                t.label = Label::Null;
            else if (label == "planted")
                t.label = Label::Planted;
            else
                throw InvalidInput("ground_truth.label must be \"null\" or \"planted\"");
            if (t.z.size() != loaded.graph.n()) throw InvalidInput("ground_truth.z length differs from n");
            truth = std::move(t);
        } catch (const json::exception& e) {
            throw InvalidInput(std::string("malformed ground_truth: ") + e.what());
        }
    }
    return {SignedInstance{std::move(loaded.graph), std::move(signs), std::move(truth)}, loaded.was_canonical};
}

json covers_to_json(std::span<const EvenCover> covers, std::size_t T, std::uint64_t seed) {
    return {{"covers", std::vector<EvenCover>(covers.begin(), covers.end())}, {"T", T}, {"seed", seed}};
}

CoverFile covers_from_json(const json& doc) {
    try {
        CoverFile file;
        file.covers = require(doc, "covers").get<std::vector<EvenCover>>();
        if (doc.contains("T")) file.T = doc.at("T").get<std::size_t>();
        if (doc.contains("seed")) file.seed = doc.at("seed").get<std::uint64_t>();
        for (const auto& cover : file.covers)
            if (!is_strictly_increasing(cover)) throw InvalidInput("cover indices must be strictly increasing");
        return file;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed cover file: ") + e.what());
    }
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidInput("cannot parse " + path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

} // namespace kxor::io
