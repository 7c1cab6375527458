#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace tdt {

using Rational = mpq_class;

/// Parses "12", "0.18", "-3.5" or "7/3" exactly. Returns nullopt on malformed input.
std::optional<Rational> parse_rational(std::string_view text);

/// "p/q" in lowest terms, or "p" for integers. Inverse of parse_rational.
std::string to_fraction_string(const Rational& value);

/// Finite decimal when the denominator only has factors 2 and 5 ("0.9"),
/// otherwise the fraction form.
std::string to_display_string(const Rational& value);

bool has_finite_decimal(const Rational& value);

/// Nearest double, for diagnostics and heuristics only.
double to_double(const Rational& value);

} // namespace tdt
