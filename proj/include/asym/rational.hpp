#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace asym {

/// Exact arbitrary-precision rational. Always kept canonical.
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);

/// Parses "a/b", "a" or a finite decimal such as "0.75".
Rational parse_rational(std::string_view text);

/// Canonical "a/b" (or "a" when the denominator is one).
std::string to_string(const Rational& r);
std::string numerator_string(const Rational& r);
std::string denominator_string(const Rational& r);
Rational from_parts(std::string_view num, std::string_view den);

/// 2^e for any integer e.
Rational pow2(long e);
/// base^e for e >= 0.
Rational pow(const Rational& base, unsigned long e);

/// Square root when the argument is the square of a rational.
std::optional<Rational> exact_sqrt(const Rational& r);

double to_double(const Rational& r);

}  // namespace asym
