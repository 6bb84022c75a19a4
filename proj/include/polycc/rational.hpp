#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace polycc {

/// Exact rational scalar. GMP keeps every arithmetic result in canonical
/// form (reduced, positive denominator).
using Rat = mpq_class;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Builds num/den in canonical form. Throws std::domain_error on den == 0.
Rat make_rat(long num, long den = 1);

/// Accepts "p/q", "p" and finite decimals such as "-0.125" or "1e-3".
Rat parse_rat(std::string_view text);

/// Always emits "p/q" (q >= 1), so integers print as "3/1".
std::string format_rat(const Rat& value);

double to_double(const Rat& value);

/// sqrt of a non-negative rational, correctly rounded to within one ulp of
/// the double result (computed at 256-bit precision first).
double sqrt_to_double(const Rat& value);

/// Smallest rational of the form k / 10^12 that is >= sqrt(value).
Rat sqrt_upper_bound(const Rat& value);

inline Rat abs(const Rat& value) { return value < 0 ? Rat(-value) : value; }

Rat pow(const Rat& base, unsigned exponent);

}  // namespace polycc
