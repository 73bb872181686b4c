#pragma once

#include <cstdint>
#include <limits>

namespace kxor {

std::uint64_t mix64(std::uint64_t x) noexcept;
std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) noexcept;

/// Counter-based random stream keyed by (seed, stream id).
///
/// `at(i)` is a pure function of the key and the counter, so draws keyed by
/// an index (edge, walk, iteration) do not depend on evaluation order.
/// `operator()` walks the counter sequentially and satisfies
/// UniformRandomBitGenerator. `fork(id)` derives an independent child stream.
class RngStream {
public:
    using result_type = std::uint64_t;

    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return at(counter_++); }
    result_type at(std::uint64_t counter) const noexcept;

    RngStream fork(std::uint64_t id) const noexcept;

    /// Uniform integer in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound);
    /// Uniform double in [0, 1).
    double uniform01() noexcept { return to_unit((*this)()); }

    static double to_unit(std::uint64_t bits) noexcept {
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace kxor
