#pragma once

#include <stdexcept>
#include <string>

namespace kxor {

/// Malformed arguments or data that violate a documented precondition.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A request exceeds a guard rail (enumeration caps, materialization size, ...).
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Neighbor sampling at a Kikuchi vertex of degree zero.
class NoNeighbor : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Stationary sampling on a hypergraph with no hyperedges.
class NoEdge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace kxor
