#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace cemax {

/// Exact fraction; GMP keeps it coprime with a positive denominator.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "a", "-a" or "a/b". Returns false on malformed input or a zero denominator.
bool parse_rational(std::string_view text, Rational& out);

/// Lowest-terms text: "a" for integers, "a/b" otherwise.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

Integer ceil(const Rational& q);
Integer floor(const Rational& q);

bool is_integer(const Rational& q);

/// Throws std::overflow_error if z does not fit.
std::int64_t to_int64(const Integer& z);

}  // namespace cemax
