#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace basespace {

using Rational = mpq_class;

/// 2^e for any integer e.
Rational pow2(long e);
Rational pow_int(const Rational& x, unsigned long e);
Rational abs(const Rational& x);

/// Accepts "p/q", signed integers and decimals such as "-1.414" or "2.5e-3".
Rational parse_rational(std::string_view text);
/// "p/q", or "p" when the denominator is one.
std::string format_rational(const Rational& x);
double to_double(const Rational& x);

/// floor(sqrt(a)) for a >= 0.
mpz_class isqrt(const mpz_class& a);

/// Closed rational interval [lo, hi].
struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  Interval(Rational x) : lo(x), hi(std::move(x)) {}
  Interval(Rational l, Rational h);

  bool exact() const { return lo == hi; }
  Rational width() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains_zero() const { return lo <= 0 && hi >= 0; }

  friend Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
  friend Interval operator-(const Interval& a, const Interval& b) { return {a.lo - b.hi, a.hi - b.lo}; }
  friend Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }
  friend Interval operator*(const Interval& a, const Interval& b);
  /// Throws std::domain_error if b contains zero.
  friend Interval operator/(const Interval& a, const Interval& b);
};

Interval abs(const Interval& x);
Interval pow_int(const Interval& x, unsigned long e);
/// Encloses exp(x) with outward error below 2^-bits beyond the true range.
Interval exp(const Interval& x, unsigned bits);
/// Encloses sqrt(x) for x >= 0, widened by at most 2^-bits.
Interval sqrt(const Interval& x, unsigned bits);
/// Smallest enclosing interval of both.
Interval hull(const Interval& a, const Interval& b);

}  // namespace basespace
