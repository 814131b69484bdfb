#pragma once

#include <gmpxx.h>

#include <string>

#include "certlogic/errors.hpp"

namespace certlogic {

// Exact arbitrary-precision rational. Backed by GMP; always canonical
// (lowest terms, positive denominator). The only numeric type used for
// probabilities anywhere in the library.
using Rational = mpq_class;
using Integer = mpz_class;

// Parses "num/den" or "int". Throws ValidationError on malformed input or
// zero denominator.
Rational parse_rational(const std::string& text);

// Renders as "num/den", or "num" when the denominator is 1.
std::string rational_to_string(const Rational& q);

inline Rational make_rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace certlogic
