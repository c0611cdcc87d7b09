#include "basespace/rational.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace basespace {

Rational pow2(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  if (e >= 0) return Rational(p);
  Rational r(1, 1);
  r = r / Rational(p);
  return r;
}

Rational pow_int(const Rational& x, unsigned long e) {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), x.get_num_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), x.get_den_mpz_t(), e);
  Rational r(n, d);
  r.canonicalize();
  return r;
}

Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&]() { return std::invalid_argument("not a rational number: '" + s + "'"); };
  if (s.empty()) throw bad();
  if (s.find('/') != std::string::npos) {
    Rational r;
    if (r.set_str(s, 10) != 0 || r.get_den() == 0) throw bad();
    r.canonicalize();
    return r;
  }
  std::size_t pos = 0;
  bool neg = false;
  if (s[pos] == '+' || s[pos] == '-') neg = s[pos++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_digit = false, seen_point = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      seen_digit = true;
      if (seen_point) --scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw bad();
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') throw bad();
    std::string exp = s.substr(pos + 1);
    if (exp.empty()) throw bad();
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(exp, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != exp.size()) throw bad();
    scale += e;
  }
  mpz_class mant(digits, 10), ten;
  mpz_ui_pow_ui(ten.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Rational r = scale >= 0 ? Rational(mant * ten) : Rational(mant, ten);
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

std::string format_rational(const Rational& x) { return x.get_str(10); }

double to_double(const Rational& x) { return x.get_d(); }

mpz_class isqrt(const mpz_class& a) {
  if (a < 0) throw std::domain_error("square root of a negative number");
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), a.get_mpz_t());
  return r;
}

Interval::Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
  if (lo > hi) throw std::invalid_argument("interval with lo > hi");
}

Interval operator*(const Interval& a, const Interval& b) {
  if (a.exact() && b.exact()) return Interval(Rational(a.lo * b.lo));
  Rational c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw std::domain_error("division by an interval containing zero");
  Rational one(1);
  return a * Interval(one / b.hi, one / b.lo);
}

Interval abs(const Interval& x) {
  if (x.lo >= 0) return x;
  if (x.hi <= 0) return -x;
  return {Rational(0), std::max(Rational(-x.lo), x.hi)};
}

Interval pow_int(const Interval& x, unsigned long e) {
  if (x.exact()) return Interval(pow_int(x.lo, e));
  if (e == 0) return Interval(Rational(1));
  Rational a = pow_int(x.lo, e), b = pow_int(x.hi, e);
  if (e % 2 == 1 || x.lo >= 0) return {std::min(a, b), std::max(a, b)};
  if (x.hi <= 0) return {b, a};
  return {Rational(0), std::max(a, b)};
}

namespace {

// Enclosure of exp(x) for |x| <= 1 by a Taylor polynomial plus the
// Lagrange remainder, bounded with e^|x| <= 3.
Interval exp_small(const Rational& x, unsigned bits) {
  const Rational tol = pow2(-static_cast<long>(bits) - 2);
  Rational sum = 1, term = 1;
  for (unsigned long i = 1;; ++i) {
    term = term * x / i;
    sum += term;
    Rational rem = abs(term) * abs(x) / (i + 1) * 3;
    if (rem < tol) return {sum - rem, sum + rem};
  }
}

// Rational bounds near `x` with denominator 2^bits, keeping the direction.
Rational round_down(const Rational& x, unsigned bits) {
  mpz_class scaled = x.get_num() << bits, q;
  mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), x.get_den_mpz_t());
  return Rational(q, mpz_class(1) << bits);
}

Rational round_up(const Rational& x, unsigned bits) {
  mpz_class scaled = x.get_num() << bits, q;
  mpz_cdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), x.get_den_mpz_t());
  return Rational(q, mpz_class(1) << bits);
}

Interval exp_point(const Rational& x, unsigned bits) {
  // Halve until |x| <= 1, then square back up.
  unsigned halvings = 0;
  Rational y = x;
  while (abs(y) > 1) {
    y /= 2;
    ++halvings;
  }
  Interval r = exp_small(y, bits + 2 * halvings + 8);
  for (unsigned i = 0; i < halvings; ++i) {
    r = r * r;
    // Keep denominators bounded; rounding is outward.
    r = Interval(round_down(r.lo, bits + 2 * halvings + 16), round_up(r.hi, bits + 2 * halvings + 16));
  }
  return r;
}

}  // namespace

Interval exp(const Interval& x, unsigned bits) {
  Interval a = exp_point(x.lo, bits);
  if (x.exact()) return a;
  Interval b = exp_point(x.hi, bits);
  return {a.lo, b.hi};
}

Interval sqrt(const Interval& x, unsigned bits) {
  if (x.lo < 0) throw std::domain_error("square root of a negative interval");
  auto bound = [bits](const Rational& v, bool up) {
    // floor(sqrt(v * 4^bits)) / 2^bits, adjusted outward.
    mpz_class scaled = v.get_num() << (2 * bits), q;
    mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), v.get_den_mpz_t());
    mpz_class r = isqrt(q);
    if (up) r += 1;
    return Rational(r, mpz_class(1) << bits);
  };
  return {bound(x.lo, false), bound(x.hi, true)};
}

Interval hull(const Interval& a, const Interval& b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

}  // namespace basespace
