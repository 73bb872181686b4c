#include "kxor/bigmath.hpp"

#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "kxor/errors.hpp"

namespace kxor {

BigInt binomial(std::uint64_t n, std::uint64_t r) {
    if (r > n) return 0;
    r = std::min(r, n - r);
    BigInt result = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
        result *= n - r + i;
        result /= i;
    }
    return result;
}

double ln(const BigInt& value) {
    if (value <= 0) throw InvalidInput("ln of a non-positive integer");
    using Float = boost::multiprecision::cpp_bin_float_50;
    return static_cast<double>(boost::multiprecision::log(Float(value)));
}

double to_double(const Rational& value) {
    return static_cast<double>(value);
}

} // namespace kxor
