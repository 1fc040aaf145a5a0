#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace mspe {

/// Arbitrary-precision rational, always kept in canonical (reduced) form.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses `INT`, `INT/INT` or `DECIMAL` (digits '.' digits) exactly.
/// A leading '-' is accepted; callers decide whether negatives are legal.
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Bit-exact serialization: always "num/den", never a decimal.
std::string to_fraction_string(const Rational& q);

/// Human form: "3" for integers, "num/den" otherwise.
std::string to_plain_string(const Rational& q);

/// Decimal approximation with `digits` significant digits, for reports only.
std::string to_decimal_string(const Rational& q, int digits = 12);

std::size_t bit_length(const Integer& z);

/// bit_length(numerator) + bit_length(denominator).
std::size_t bit_size(const Rational& q);

/// 2^exponent, exponent may be negative.
Rational pow2(long exponent);

Rational pow(const Rational& base, unsigned long exponent);

/// Largest multiple of 2^-precision that is <= q.
Rational floor_to_grid(const Rational& q, unsigned long precision);

/// Smallest multiple of 2^-precision that is >= q.
Rational ceil_to_grid(const Rational& q, unsigned long precision);

/// ceil(q) as an integer.
Integer ceil(const Rational& q);

/// A rational r with r >= log2(q), at most ~2^-60 above the true value.
/// Requires q > 0.
Rational log2_upper(const Rational& q);

/// Largest integer i with q <= 2^-i. Requires q > 0.
long floor_neg_log2(const Rational& q);

/// Smallest power of two (2^e, e >= 0) that is >= q.
Rational pow2_ceil_at_least_one(const Rational& q);

double to_double(const Rational& q);

}  // namespace mspe
