#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace flatform {

/// Exact rational scalar. GMP keeps every value in canonical reduced form
/// (gcd(num, den) = 1, den > 0) after each arithmetic operation.
using Scalar = mpq_class;

/// Parses an exact scalar from text. Accepted forms:
///   "17", "-3/4", "0.125", "-2.5e-3"
/// Decimal literals are converted exactly as written, so "0.1" is 1/10.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Scalar parse_scalar(std::string_view text);

/// Canonical text form: "a" for integers, "a/b" otherwise.
std::string format_scalar(const Scalar& value);

inline bool is_zero(const Scalar& value) { return sgn(value) == 0; }

}  // namespace flatform
