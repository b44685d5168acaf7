#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace parifs {

using BigInt = mpz_class;
/// Always canonical (lowest terms, positive denominator); gmpxx canonicalizes after every arithmetic op.
using Rational = mpq_class;

/// Parses "p/q", "n" or a finite decimal such as "1.1" or "-2.50" into an exact rational.
Rational parse_rational(std::string_view text);

/// Serializes as "p/q"; integers keep the "/1" so the format is uniform.
std::string to_string(const Rational& r);

BigInt floor(const Rational& r);
BigInt ceil(const Rational& r);

Rational abs(const Rational& r);

/// base^exp for a non-negative machine exponent.
Rational pow(const Rational& base, std::uint64_t exp);
BigInt pow(const BigInt& base, std::uint64_t exp);

/// Nearest double; huge/tiny magnitudes are handled through the exponent, not by overflowing.
double to_double(const Rational& r);

/// Exact conversions between BigInt and 64-bit unsigned (mpz's ulong is not portable to 64 bits everywhere).
BigInt from_u64(std::uint64_t v);
/// Throws InputError when v is negative or does not fit.
std::uint64_t to_u64(const BigInt& v);

/// Natural log of a positive integer as a double.
double log_double(const BigInt& v);

/// Natural log of a positive rational as a double, accurate for operands far outside double range.
double log_double(const Rational& r);

}  // namespace parifs
