#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace iet {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "num/den" or "num" (optionally signed). Throws std::invalid_argument
/// on malformed text or a zero denominator. The result is canonicalized.
Rational parse_rational(std::string_view text);

/// Always "num/den", including "n/1" for integers.
std::string format_rational(const Rational& value);

std::string format_integer(const Integer& value);

/// Natural logarithm of a positive integer, accurate to double precision
/// regardless of magnitude.
double log_of(const Integer& value);

/// Natural logarithm of a positive rational, computed as log(num) - log(den).
double log_of(const Rational& value);

inline Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

}  // namespace iet
