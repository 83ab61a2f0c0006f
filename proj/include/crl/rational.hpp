#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace crl {

// Canonical arbitrary-precision rational. GMP keeps mpq_class in lowest terms
// with a positive denominator after every arithmetic operation.
using Rational = mpq_class;

Rational make_rational(long numerator, long denominator = 1);

/// Parses "p", "p/q" or "-p/q".
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.get_d(); }

Rational sum(const std::vector<Rational>& values);

}  // namespace crl
