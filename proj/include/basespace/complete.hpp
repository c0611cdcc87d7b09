#pragma once

#include <functional>
#include <string>
#include <vector>

#include "basespace/expr.hpp"
#include "basespace/presentation.hpp"

namespace basespace {

/// A sequence in the dense presentation with a modulus of cauchyness:
/// for i, j >= modulus(k) the terms are within eps_k of each other.
struct ModulusCauchySeq {
  std::function<Rational(std::size_t)> at;
  std::function<std::size_t(std::size_t)> modulus;
  std::string name;
  /// Eventually constant from index 0 (an embedded point): the limit is g_0.
  bool constant = false;
};

struct CompletionPoint {
  ModulusCauchySeq rep;
};

CompletionPoint embed(const Rational& x);

/// floor(sqrt2 * 10^n) / 10^n; modulus k -> least n with 10^n >= 2^k.
ModulusCauchySeq sqrt2_decimal();
/// Convergents p_n / q_n of sqrt2 (1/1, 3/2, 7/5, ...); modulus k -> least m
/// with q_m * q_{m+1} > 2^k.
ModulusCauchySeq sqrt2_continued_fraction();
/// Finite tables; the last value repeats. Levels beyond the modulus table
/// raise PrecisionExhausted.
ModulusCauchySeq table_sequence(std::vector<Rational> values, std::vector<std::size_t> modulus);
/// Term in the variable n, modulus in the variable k. Terms must evaluate
/// exactly and moduli to nonnegative integers.
ModulusCauchySeq expression_sequence(const Expr& term, const Expr& modulus);

/// Three-way comparison at level k: equal when the certified distance is
/// below the radius of eps_{h(k)}, apart when certified at or above it.
/// Representatives are read at internal levels from h(h(k)) + 1 upward.
struct EqResult {
  Status status = Status::Unknown;  // Holds = equal-at-k, Fails = apart-at-k
  std::size_t level = 0;            // internal level used
  std::size_t index_p = 0;
  std::size_t index_q = 0;
  Rational value_p;
  Rational value_q;
  Interval distance;  // certified enclosure of u(P, Q)
};
EqResult eq_at_level(const CompletionPoint& p, const CompletionPoint& q, std::size_t k,
                     const DensePresentation& pres = {});

/// Validates the claimed modulus on every pair in [m(k), horizon] for each
/// level k whose modulus fits under the horizon (up to max_level). A single
/// violation falsifies; otherwise the verdict is "holds to horizon".
struct CauchyCheckResult {
  Status status = Status::Holds;
  std::size_t levels_checked = 0;
  std::size_t level = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  std::string detail;
};
CauchyCheckResult cauchy_check(const ModulusCauchySeq& seq, std::size_t horizon, std::size_t max_level = 64,
                               const DensePresentation& pres = {});

using DenseMap = std::function<Rational(const Rational&)>;
using LevelMap = std::function<std::size_t(std::size_t)>;

/// f(g_{m(omega(k))}), within 2^-k of the extension F(p).
struct Extension {
  Rational value;
  std::size_t index = 0;
  std::size_t level = 0;  // omega(k)
  std::size_t samples = 0;
};
/// Spot-checks omega near p and raises PreconditionUnmet on a violation.
Extension uniform_extend(const DenseMap& f, const LevelMap& omega, const CompletionPoint& p, std::size_t k,
                         const DensePresentation& pres = {});
/// The image point F(p) as a completion point: n -> f(g_n), k -> m(omega(k)).
CompletionPoint extend_point(const DenseMap& f, const LevelMap& omega, const CompletionPoint& p);

/// Ball {y : u(centre, y) in eps_level}; `full` stands for the whole space.
struct BallDescriptor {
  Rational centre;
  std::size_t level = 0;
  bool full = false;
};
struct TailResult {
  Status status = Status::Unknown;
  std::size_t ball = 0;  // index of the ball holding the tail
  std::string detail;
};
/// Whether some tail lies in the union of the balls, read at level k.
TailResult tail_in_open(const ModulusCauchySeq& seq, const std::vector<BallDescriptor>& q, std::size_t k,
                        const DensePresentation& pres = {});

/// Limit of a cauchy sequence of completion points with outer modulus M:
/// n -> (P_{M(n+1)}) read at level n+1, with modulus k -> k+2.
CompletionPoint diagonal(const std::function<CompletionPoint(std::size_t)>& points, const LevelMap& outer);

}  // namespace basespace
