#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "basespace/rational.hpp"

namespace basespace {

using Env = std::map<std::string, Interval, std::less<>>;

/// Arithmetic expressions over rationals with interval evaluation.
///
///   expr    := cmp
///   cmp     := sum (('<' | '<=' | '>' | '>=') sum)?
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := atom ('^' unary)?
///   atom    := number | name | name '(' args ')' | '(' expr ')'
///
/// Functions: exp, sqrt, abs, min, max, fact(n), dyadic(t) (1 on dyadic
/// rationals, else 0), sum(i, from, to, body). Comparisons give 1 or 0.
/// Exponents must evaluate to exact integers.
class Expr {
 public:
  struct Node;

  /// Throws InputError with the offending position.
  static Expr parse(std::string_view text);
  static Expr constant(const Rational& c);

  /// Interval enclosure; transcendental parts are accurate to about 2^-bits.
  /// Throws InputError for unbound names and std::domain_error on invalid
  /// arithmetic (division by an interval containing zero and so on).
  Interval eval(const Env& env, unsigned bits = 64) const;
  /// Value when the enclosure is a single rational.
  std::optional<Rational> eval_exact(const Env& env) const;
  /// Convenience for one variable.
  Interval eval(std::string_view var, const Interval& x, unsigned bits = 64) const;

  const std::string& text() const { return text_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace basespace
