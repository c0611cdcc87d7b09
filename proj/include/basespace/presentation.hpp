#pragma once

#include <functional>
#include <memory>
#include <string>

#include "basespace/approach.hpp"
#include "basespace/rational.hpp"

namespace basespace {

/// Thrown when an oracle cannot settle a query within its precision budget.
struct PrecisionExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Computes u(x, y) as an interval whose width is at most 2^-bits.
/// Implementations must be stateless between queries.
class UOracle {
 public:
  virtual ~UOracle() = default;
  virtual Interval distance(const Rational& x, const Rational& y, unsigned bits) const = 0;
  virtual std::string name() const = 0;
};

/// u(x, y) = |x - y| over the rationals, computed exactly.
class RationalMetric final : public UOracle {
 public:
  Interval distance(const Rational& x, const Rational& y, unsigned) const override { return Interval(abs(x - y)); }
  std::string name() const override { return "rational-metric"; }
};

/// Radius levels eps_k = [0, 2^-k) with halving certificate h.
struct DensePresentation {
  std::shared_ptr<const UOracle> oracle = std::make_shared<RationalMetric>();
  std::function<std::size_t(std::size_t)> halving = [](std::size_t k) { return k + 1; };
  unsigned max_bits = 512;

  static Rational radius(std::size_t k) { return pow2(-static_cast<long>(k)); }
  Rational parse(const std::string& text) const { return parse_rational(text); }
  std::string format(const Rational& x) const { return format_rational(x); }
};

/// Tri-state u(x, y) in eps_k, refining precision until settled or max_bits.
Status in_radius(const DensePresentation& p, const Rational& x, const Rational& y, std::size_t k);

/// Sampled triple check of the halving certificate: u(x,y), u(y,z) in
/// eps_{h(k)} must give u(x,z) in eps_k. Points are drawn near each other
/// on dyadic grids so the hypothesis is exercised. Returns failures found.
struct HalvingReport {
  std::size_t triples = 0;
  std::size_t exercised = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};
HalvingReport validate_halving(const DensePresentation& p, std::size_t max_level, std::size_t samples,
                               std::uint64_t seed);

}  // namespace basespace
