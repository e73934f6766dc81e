#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace tropasym {

/// Exact rational scalar. All tropical computation happens on these.
using Rational = mpq_class;

/// Parses "3", "-2.5", "1e-3", "0.125E2" or "7/3" into an exact rational.
/// Throws InputError on anything else.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Exact conversion of a finite double (every double is a dyadic rational).
Rational from_double(double value);

}  // namespace tropasym
