#include "kxor/rng.hpp"

#include <random>

#include "kxor/errors.hpp"

namespace kxor {

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) noexcept {
    return mix64(mix64(a) ^ (b + 0x632be59bd9b4e019ull + (a << 6) + (a >> 2)));
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed), stream_id_(stream_id), key_(hash_combine(seed, stream_id)) {}

RngStream::result_type RngStream::at(std::uint64_t counter) const noexcept {
    return mix64(key_ ^ mix64(counter));
}

RngStream RngStream::fork(std::uint64_t id) const noexcept {
    return RngStream(key_, id);
}

std::uint64_t RngStream::below(std::uint64_t bound) {
    if (bound == 0) throw InvalidInput("RngStream::below needs a positive bound");
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(*this);
}

} // namespace kxor
