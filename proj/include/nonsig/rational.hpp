#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace nonsig {

/// Exact rational number, always kept in canonical (reduced) form.
using Rational = mpq_class;

/// Formats as "num/den", including integers ("1/1", "0/1").
std::string to_string(const Rational& q);

/// Accepts "num/den" or a plain integer. Throws InputError otherwise.
Rational parse_rational(std::string_view text);

/// n/d in canonical form (the two-argument mpq_class constructor does not reduce).
inline Rational frac(long n, long d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace nonsig
