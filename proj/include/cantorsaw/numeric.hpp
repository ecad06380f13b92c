#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace cantorsaw {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// floor(value^(1/k)) for value >= 0, k >= 1.
BigInt integer_root(const BigInt& value, unsigned k);

BigInt pow10(unsigned digits);

// A fixed-point decimal value scaled / 10^digits.
struct Decimal {
    BigInt scaled;
    unsigned digits = 0;

    Rational to_rational() const;
    std::string to_string() const;
    double to_double() const;

    friend bool operator==(const Decimal&, const Decimal&) = default;
};

// value^(1/k) rounded to nearest at `digits` decimal places (ties round up).
Decimal nth_root_rounded(const BigInt& value, unsigned k, unsigned digits);

// Exact rational rounded to nearest at `digits` decimals.
Decimal round_rational(const Rational& value, unsigned digits);

// Parses "0.001", "1e-3", "3/4", "2" into an exact rational.
Rational parse_rational(const std::string& text);

std::string rational_to_string(const Rational& value);

// "num/den" or "num" form, exact.
std::string rational_exact_string(const Rational& value);

std::int64_t gcd64(std::int64_t a, std::int64_t b);

} // namespace cantorsaw
