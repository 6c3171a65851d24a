#pragma once

#include <gmpxx.h>

#include <cmath>
#include <string>

namespace nfsusy {

using Rational = mpq_class;

// Accepts "p", "p/q", and finite decimals such as "-0.25" or "1e-3"; the value is exact.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);
inline double to_double(const Rational& r) { return r.get_d(); }

// Exact square root when r is the square of a rational.
bool rational_sqrt(const Rational& r, Rational& root);

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static bool is_zero(const Rational& v) { return sgn(v) == 0; }
  static double to_double(const Rational& v) { return v.get_d(); }
  static Rational from_int(long v) { return Rational(v); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static bool is_zero(double v) { return v == 0.0; }
  static double to_double(double v) { return v; }
  static double from_int(long v) { return static_cast<double>(v); }
};

}  // namespace nfsusy
