#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace pnc {

/// Exact counts. Marking counts of real nets overflow 64 bits quickly.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

std::string to_string(const BigInt& value);
std::string to_string(const Rational& value);

/// Rounded scientific form with three significant digits, e.g. "1.58e24".
std::string to_scientific(const BigInt& value);

/// Binomial coefficient C(n, k) for non-negative arguments; zero when k > n.
BigInt binomial(const BigInt& n, std::uint64_t k);

bool is_integer(const Rational& value);

}  // namespace pnc
