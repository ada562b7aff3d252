// Arbitrary-precision rational scalars (exact substrate for polynomials).
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "carnot/error.hpp"

namespace carnot {

using BigInt = boost::multiprecision::cpp_int;
// Normalized: denominator > 0, gcd(|num|, den) == 1 after every operation.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.template convert_to<double>(); }

// Prints as "num/den" (always with the denominator, so that text output is
// uniform and machine-parsable).
inline std::string rational_to_string(const Rational& q) {
    return numerator(q).str() + "/" + denominator(q).str();
}

// Accepts "num/den" or a bare integer "num".
Rational parse_rational(const std::string& text);

inline Rational rational_pow(Rational base, unsigned e) {
    Rational out = 1;
    while (e != 0) {
        if (e & 1u) out *= base;
        base *= base;
        e >>= 1u;
    }
    return out;
}

} // namespace carnot
