#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <limits>

#include "momentdet/errors.hpp"

namespace momentdet {

/// Exact rational scalar used by the validation backend.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Exact conversion of an IEEE double (every finite double is p / 2^k).
inline Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw InvalidParameter("cannot convert non-finite double to rational");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  // mantissa in [0.5, 1); 53 bits recovers it exactly
  const double mant = std::frexp(x, &exp);
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r(scaled);
  if (exp >= 0) {
    r *= Rational(BigInt(1) << exp);
  } else {
    r /= Rational(BigInt(1) << -exp);
  }
  return r;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace momentdet
