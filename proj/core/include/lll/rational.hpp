#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace lll {

/// Exact rational number. All probability and weight arithmetic in this
/// library is carried out on this type; floating point appears only in
/// sampling and statistics.
using Rational = mpq_class;

/// Parses "num/den" or a plain integer string into a canonical rational.
/// Throws ParseError on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Renders as "num/den", or just "num" when the denominator is 1.
std::string rational_str(const Rational& value);

/// value^exp with exact arithmetic (exp >= 0).
Rational rational_pow(const Rational& value, unsigned long exp);

inline double rational_double(const Rational& value) { return value.get_d(); }

/// Conventional rational stand-in for Euler's number in criterion checks.
/// Slightly above e so that symmetric-criterion comparisons stay sound.
inline const Rational& euler_upper_bound() {
    static const Rational e(2719, 1000);
    return e;
}

/// Lower bound on e, for checking "count <= e * ..." style inequalities
/// against the strongest rational right-hand side.
inline const Rational& euler_lower_bound() {
    static const Rational e(2718, 1000);
    return e;
}

}  // namespace lll
