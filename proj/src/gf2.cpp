#include "kxor/gf2.hpp"

#include <algorithm>
#include <bit>

#include "kxor/errors.hpp"

namespace kxor {

namespace {

class BitRow {
public:
    explicit BitRow(std::size_t bits) : words_((bits + 63) / 64, 0) {}

    bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }
    BitRow& operator^=(const BitRow& other) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
        return *this;
    }
    friend bool operator==(const BitRow&, const BitRow&) = default;

private:
    std::vector<std::uint64_t> words_;
};

} // namespace

NullspaceBasis gf2_nullspace_basis(const Hypergraph& graph) {
    const std::size_t m = graph.m();
    NullspaceBasis basis;
    basis.columns = m;

    // Incidence rows: one per vertex, one bit per edge.
    std::vector<BitRow> rows(graph.n(), BitRow(m));
    for (std::size_t e = 0; e < m; ++e)
        for (Vertex v : graph.edge(static_cast<EdgeIndex>(e))) rows[v].set(e);

    std::vector<std::size_t> pivot_columns;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && !rows[pivot].test(col)) ++pivot;
        if (pivot == rows.size()) {
            basis.free_columns.push_back(static_cast<EdgeIndex>(col));
            continue;
        }
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != rank && rows[r].test(col)) rows[r] ^= rows[rank];
        pivot_columns.push_back(col);
        ++rank;
    }

    for (EdgeIndex free : basis.free_columns) {
        EdgeSet vector{free};
        for (std::size_t r = 0; r < rank; ++r)
            if (rows[r].test(free)) vector.push_back(static_cast<EdgeIndex>(pivot_columns[r]));
        std::sort(vector.begin(), vector.end());
        basis.vectors.push_back(std::move(vector));
    }
    return basis;
}

bool NullspaceBasis::contains(const EdgeSet& x) const {
    BitRow target(columns);
    for (EdgeIndex e : x) {
        if (e >= columns) return false;
        target.flip(e);
    }
    BitRow sum(columns);
    for (std::size_t i = 0; i < free_columns.size(); ++i) {
        if (!target.test(free_columns[i])) continue;
        BitRow v(columns);
        for (EdgeIndex e : vectors[i]) v.set(e);
        sum ^= v;
    }
    return sum == target;
}

std::vector<EvenCover> enumerate_even_covers(const Hypergraph& graph, std::size_t max_size) {
    const std::size_t m = graph.m();
    if (m > 25) throw CapacityError("even-cover enumeration is capped at m <= 25");

    std::vector<EvenCover> covers;
    const std::uint32_t limit = std::uint32_t{1} << m;
    for (std::uint32_t mask = 1; mask < limit; ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) > max_size) continue;
        std::vector<std::uint8_t> count(graph.n(), 0);
        for (std::size_t e = 0; e < m; ++e)
            if (mask >> e & 1u)
                for (Vertex v : graph.edge(static_cast<EdgeIndex>(e))) count[v] ^= 1u;
        if (std::any_of(count.begin(), count.end(), [](std::uint8_t c) { return c != 0; })) continue;
        EvenCover cover;
        for (std::size_t e = 0; e < m; ++e)
            if (mask >> e & 1u) cover.push_back(static_cast<EdgeIndex>(e));
        covers.push_back(std::move(cover));
    }
    std::sort(covers.begin(), covers.end());
    return covers;
}

} // namespace kxor
