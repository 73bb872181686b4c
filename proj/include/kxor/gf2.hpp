#pragma once

#include <cstddef>
#include <vector>

#include "kxor/hypergraph.hpp"

namespace kxor {

/// Right nullspace of the n x m vertex-edge incidence matrix over GF(2).
///
/// Built by row reduction with the lowest-index pivot row, so the basis is
/// reproducible. Basis vector i has a one in free column `free_columns[i]`
/// and zeros in every other free column.
struct NullspaceBasis {
    std::size_t columns = 0;
    std::vector<EdgeIndex> free_columns;
    std::vector<EdgeSet> vectors;

    std::size_t dimension() const noexcept { return vectors.size(); }

    /// Span membership: `x` is in the span iff it equals the sum of the basis
    /// vectors selected by its free-column entries.
    bool contains(const EdgeSet& x) const;
};

NullspaceBasis gf2_nullspace_basis(const Hypergraph& graph);

/// Every nonempty even cover with at most `max_size` edges, by subset
/// enumeration. Throws CapacityError when m > 25.
std::vector<EvenCover> enumerate_even_covers(const Hypergraph& graph, std::size_t max_size);

} // namespace kxor
