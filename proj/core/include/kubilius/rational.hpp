#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace kubilius {

using Integer = mpz_class;
using Rational = mpq_class;

// Accepts "p/q", "p", and plain decimals such as "-0.125" or "2.5e-3".
// Decimals are converted exactly. Throws InvalidArgument on malformed input.
Rational parse_rational(std::string_view text);

// Lowest terms with positive denominator; integers print without "/1".
std::string to_string(const Rational& value);

// Natural logarithm of |value|; value must be nonzero. Accurate even when
// value lies far outside the range of double.
double log_abs(const Rational& value);

double to_double(const Rational& value);

Integer factorial(std::size_t n);

// base^exponent for a nonnegative integer exponent.
Rational power(const Rational& base, std::size_t exponent);

}  // namespace kubilius
