#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace cdc {

// All loads, surface values and bounds are carried as exact rationals.
using Rational = boost::rational<std::int64_t>;

// Renders as "p/q" (integers too, e.g. "2/1").
std::string format_rational(const Rational& x);

// Accepts "p/q", "p" or a finite decimal such as "2.5". Throws ParameterError.
Rational parse_rational(std::string_view text);

// Fixed-point decimal rendering with `digits` fractional digits, rounded
// half away from zero.
std::string to_decimal(const Rational& x, int digits = 6);

double to_double(const Rational& x);

}  // namespace cdc
