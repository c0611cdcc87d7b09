#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "basespace/approach.hpp"
#include "basespace/expr.hpp"

namespace basespace {

/// Module elements and ring scalars as rational component vectors. Complex
/// numbers take two components (re, im); mod-p components are reduced
/// integers.
using Element = std::vector<Rational>;
using Scalar = std::vector<Rational>;

struct ModuleSpec {
  enum class Kind { Real, Complex, ModP };
  Kind kind = Kind::Real;
  std::size_t dim = 1;     // n, k or m
  unsigned long p = 0;     // ModP only

  static ModuleSpec real(std::size_t n = 1) { return {Kind::Real, n, 0}; }
  static ModuleSpec complex(std::size_t k = 1) { return {Kind::Complex, k, 0}; }
  static ModuleSpec modp(unsigned long p, std::size_t m = 1) { return {Kind::ModP, m, p}; }
  /// "real:1", "complex:2", "modp:5" or "modp:5:2". Throws InputError.
  static ModuleSpec parse(const std::string& text);
  std::string text() const;

  std::size_t components() const { return kind == Kind::Complex ? 2 * dim : dim; }
  std::size_t scalar_components() const { return kind == Kind::Complex ? 2 : 1; }

  Element zero() const { return Element(components(), Rational(0)); }
  Element add(const Element& a, const Element& b) const;
  Element neg(const Element& a) const;
  Element scale(const Scalar& s, const Element& a) const;
  /// Sup norm of a - b over the rational components; 0 or 1 for mod p.
  Rational distance(const Element& a, const Element& b) const;
  /// Reduces mod p; throws InputError on a wrong size or a non-integer mod-p
  /// component.
  Element normalize(Element a) const;
  Scalar normalize_scalar(Scalar s) const;
};

enum class TagRule { Left, Right, Midpoint, Third, Swap };
const char* to_string(TagRule r);
TagRule parse_tag_rule(const std::string& text);

/// A block of the atom algebra: an interval with endpoint ownership, or a
/// single label of a finite universe.
struct Atom {
  Rational lo, hi;
  bool lo_closed = true;
  bool hi_closed = false;
  std::optional<std::size_t> label;

  bool contains(const Rational& t) const;
  bool inside(const Atom& parent) const;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// A finite label set (atoms are the labels, refinement is the identity) or
/// [a, b] split at breakpoints, each block halved on refinement. Right tags
/// use blocks (lo, hi]; every other rule uses [lo, hi).
class AtomAlgebra {
 public:
  static AtomAlgebra finite(std::vector<std::string> labels);
  static AtomAlgebra interval(Rational a, Rational b, std::vector<Rational> breakpoints = {});

  bool is_finite() const { return !labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const Rational& lo() const { return a_; }
  const Rational& hi() const { return b_; }
  const std::vector<Rational>& breakpoints() const { return breaks_; }

  std::vector<Atom> initial(TagRule rule) const;
  std::vector<Atom> children(const Atom& a, TagRule rule) const;
  std::string describe(const Atom& a) const;

 private:
  std::vector<std::string> labels_;
  Rational a_, b_;
  std::vector<Rational> breaks_;
};

/// Values on atoms; the empty set is the atom with lo == hi and both ends open.
/// The integrator reads one value per block for all tag rules, so interval
/// measures should not depend on endpoint ownership.
struct VectorMeasure {
  std::function<Element(const Atom&)> value;
  std::string name;
};
VectorMeasure length_measure(const ModuleSpec& mod, Element unit = {});
/// Per-label values on a finite algebra.
VectorMeasure table_measure(const ModuleSpec& mod, std::vector<Element> values);
VectorMeasure zero_measure(const ModuleSpec& mod);
/// The same measure with one atom's value replaced; atoms are matched by
/// endpoints (or label), not endpoint ownership.
VectorMeasure with_override(VectorMeasure mu, Atom atom, Element value);
Atom empty_atom();

/// An expression in t (one per scalar component) or a per-label table.
/// Values must be exact rationals.
struct Integrand {
  std::vector<Expr> parts;
  std::vector<Scalar> table;
  std::string name;

  static Integrand expression(const std::string& text);
  static Integrand complex_expression(const std::string& re, const std::string& im);
  static Integrand of_table(std::vector<Scalar> values);
  Scalar at(const Rational& t, const ModuleSpec& mod) const;
};

struct TaggedBlock {
  Atom atom;
  Rational tag;
};
struct IndexedPartition {
  std::vector<TaggedBlock> blocks;
  std::size_t depth = 0;
  TagRule rule = TagRule::Left;
};

/// Tag of a fresh block under the rule at the given depth.
Rational rule_tag(const Atom& a, TagRule rule, std::size_t depth);
IndexedPartition initial_partition(const AtomAlgebra& alg, TagRule rule);
/// Splits every block; each old tag stays with the child containing it and
/// the other children get rule tags. Throws InputError on an invalid input.
IndexedPartition refine(const AtomAlgebra& alg, const IndexedPartition& part);
/// Throws InputError unless the blocks partition the universe and every tag
/// lies in its block.
void check_partition(const AtomAlgebra& alg, const IndexedPartition& part);
/// (F, P) <= (F', P'): F inside F' and every block of P' inside a block of P.
bool is_refinement(const IndexedPartition& fine, const IndexedPartition& coarse);

/// sum over blocks of f(tag) mu(block).
Element riemann_value(const Integrand& f, const IndexedPartition& part, const VectorMeasure& mu,
                      const ModuleSpec& mod);

struct IntegrateOptions {
  std::size_t depth = 16;
  TagRule tags = TagRule::Left;
  /// Default 2^-ceil(depth/2).
  std::optional<Rational> tol;
};

/// Per-depth evidence: the chain value, its step from the previous depth and
/// the spread (largest distance) across the tag rules left, right, midpoint,
/// third and the requested one on the same blocks.
struct DepthEvidence {
  std::size_t depth = 0;
  Element chain;
  Rational step;
  std::optional<Rational> spread;  // from depth ceil(depth/2) on
};
struct IntegrateResult {
  enum class Outcome { Converged, Diverged, Undecided };
  Outcome outcome = Outcome::Undecided;
  /// Hull midpoint of the rule values at the final depth (the chain value
  /// for mod p); bound is the spread there.
  Element value;
  Rational bound;
  Rational tol;
  std::vector<DepthEvidence> trace;
  /// Diverged: two rules and their values at the final depth.
  std::string rule_a, rule_b;
  Element value_a, value_b;
  std::string detail;
};
const char* to_string(IntegrateResult::Outcome o);

/// Converged when the final spread and the final chain step are within tol.
/// Diverged when the spread exceeds tol at every depth in
/// [ceil(depth/2), depth] and has not shrunk over that window. Undecided
/// otherwise.
IntegrateResult integrate(const Integrand& f, const AtomAlgebra& alg, const VectorMeasure& mu, const ModuleSpec& mod,
                          const IntegrateOptions& opt = {});

struct MeasureReport {
  bool empty_zero = false;
  std::size_t parents = 0;
  Rational max_defect;
  std::optional<std::string> failing_parent;
  bool ok() const { return empty_zero && !failing_parent; }
};
/// mu(empty) = 0 and mu(parent) = sum of mu(children) for every atom up to
/// `depth` (within tol for real and complex modules).
MeasureReport measure_check(const AtomAlgebra& alg, const VectorMeasure& mu, const ModuleSpec& mod, std::size_t depth,
                            const Rational& tol = 0);

std::string format_element(const Element& e, const ModuleSpec& mod);

}  // namespace basespace
