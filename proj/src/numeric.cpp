#include "pnc/numeric.hpp"

#include <stdexcept>

namespace pnc {

std::string to_string(const BigInt& value) { return value.str(); }

std::string to_string(const Rational& value)
{
    if (is_integer(value))
        return boost::multiprecision::numerator(value).str();
    return boost::multiprecision::numerator(value).str() + "/" +
           boost::multiprecision::denominator(value).str();
}

std::string to_scientific(const BigInt& value)
{
    if (value == 0)
        return "0.00e0";
    const bool negative = value < 0;
    std::string digits = (negative ? BigInt(-value) : value).str();
    long exponent = static_cast<long>(digits.size()) - 1;
    const bool round_up = digits.size() > 3 && digits[3] >= '5';
    digits.resize(3, '0');

    int mantissa = std::stoi(digits);
    if (round_up)
        ++mantissa;
    if (mantissa >= 1000) {
        mantissa /= 10;
        ++exponent;
    }
    const std::string m = std::to_string(mantissa);
    return (negative ? "-" : "") + m.substr(0, 1) + "." + m.substr(1) + "e" +
           std::to_string(exponent);
}

BigInt binomial(const BigInt& n, std::uint64_t k)
{
    if (n < 0)
        throw std::invalid_argument("binomial: negative argument");
    if (BigInt(k) > n)
        return 0;
    BigInt result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

bool is_integer(const Rational& value) { return boost::multiprecision::denominator(value) == 1; }

}  // namespace pnc
