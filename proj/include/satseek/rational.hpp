#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace satseek {

// Exact rational arithmetic for dither frequency multipliers. Frequency
// validity checks and common-period computation must never touch
// floating point, so multipliers are carried as int64 rationals end to end.
using Rational = boost::rational<std::int64_t>;

// Parses "5", "-3", "7/2". Throws std::invalid_argument with the offending
// position on malformed input (e.g. "5.5.5") or a zero denominator.
[[nodiscard]] Rational parse_rational(std::string_view text);

// Canonical form "p" or "p/q" with q > 1.
[[nodiscard]] std::string format_rational(const Rational& r);

[[nodiscard]] double rational_to_double(const Rational& r);

// Least common multiple of positive rationals:
// lcm(p1/q1, p2/q2) = lcm(p1, p2) / gcd(q1, q2).
[[nodiscard]] Rational rational_lcm(const Rational& a, const Rational& b);

}  // namespace satseek
