#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace kswall {

// Exact rational coefficients. All series and invariant arithmetic stays in
// Q; floating point is confined to chart geometry.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

// "p/q" with q > 0, or just "p" when q == 1.
std::string rational_to_string(const Rational& r);

// Accepts "p", "-p", "p/q". Anything else yields nullopt.
std::optional<Rational> parse_rational(std::string_view text);

}  // namespace kswall
