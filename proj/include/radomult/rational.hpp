#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace radomult {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "p/q", "p" or "-p/q" (no whitespace, q > 0 after normalization).
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when the denominator is 1).
std::string to_string(const Rational& r);
std::string to_string(const BigInt& z);

/// Decimal rendering used by the SDPA writer: the exact expansion when the
/// denominator has only factors 2 and 5 and the expansion has at most
/// `max_digits` significant digits, otherwise the value rounded half-away to
/// `max_digits` significant digits. Trailing zeros are stripped, so parsing
/// the output with parse_decimal and rendering again is the identity.
std::string to_decimal(const Rational& r, int max_digits = 25);

/// Exact value of a decimal literal such as "-1.25e-3".
Rational parse_decimal(std::string_view text);

/// Best rational approximation with denominator at most `max_denominator`
/// (continued fractions, with the semiconvergent check).
Rational approximate(double x, long long max_denominator);

double to_double(const Rational& r);

/// num/den in lowest terms. Throws std::domain_error for den == 0.
Rational ratio(const BigInt& num, const BigInt& den);
Rational ratio(unsigned long num, unsigned long den);

}  // namespace radomult
