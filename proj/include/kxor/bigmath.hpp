#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace kxor {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact C(n, r); zero when r > n.
BigInt binomial(std::uint64_t n, std::uint64_t r);

/// Natural logarithm of a positive big integer, relative error well below 1e-12.
double ln(const BigInt& value);

double to_double(const Rational& value);

} // namespace kxor
