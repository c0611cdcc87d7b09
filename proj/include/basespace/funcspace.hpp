#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "basespace/approach.hpp"
#include "basespace/complete.hpp"
#include "basespace/expr.hpp"
#include "basespace/uspace.hpp"

namespace basespace {

/// Mixed-radix coding of tuples; coordinate 0 varies slowest.
struct TupleCoding {
  std::vector<std::size_t> sizes;

  std::size_t count() const;
  Point encode(const std::vector<Point>& coords) const;
  std::vector<Point> decode(Point p) const;
  Point coordinate(Point p, std::size_t y) const;
};

/// Finite index set Y with one base space per index.
struct ProductSpec {
  std::vector<std::string> index_labels;
  std::vector<GradedBase> factors;

  /// X^Y: the same base at every index.
  static ProductSpec power(const GradedBase& base, std::vector<std::string> index_labels);
};

/// Throws InputError on an empty index set, a label/factor count mismatch or
/// a factor that does not validate.
void check_product_spec(const ProductSpec& spec);

/// Product of finite spaces with the product topology (cylinders of factor
/// opens). Labels are "(a,b,...)"; a single factor keeps its own labels.
/// Points are capped at 64.
FinSpace product_space(const std::vector<const FinSpace*>& factors, TupleCoding* coding = nullptr);

struct ProductBase {
  GradedBase base;
  TupleCoding coding;
};

/// Named subsets of the index set.
struct ZFamily {
  enum class Kind { Singletons, Whole, Compacts, Completes, Explicit };
  Kind kind = Kind::Singletons;
  std::vector<PointSet> members;       // Explicit only
  std::optional<GradedBase> domain;    // Completes only: a base space on Y

  static ZFamily singletons() { return {}; }
  static ZFamily whole() { return {Kind::Whole, {}, {}}; }
  static ZFamily compacts() { return {Kind::Compacts, {}, {}}; }
  static ZFamily explicit_list(std::vector<PointSet> m) { return {Kind::Explicit, std::move(m), {}}; }
  static ZFamily completes(GradedBase domain) { return {Kind::Completes, {}, std::move(domain)}; }
};
const char* to_string(ZFamily::Kind k);

/// The member subsets of Y. Compacts are all nonempty subsets (Y is finite);
/// completes are the closed complete subsets of an lsb domain
/// (PreconditionUnmet otherwise).
std::vector<PointSet> resolve(const ZFamily& z, std::size_t index_count);

/// Tuple space of the factors capped at 16 points (InputError beyond).
/// Levels are cartesian tuples "(e0,r1)" of factor levels; members at a level
/// are the nonempty finite intersections of the cylinders [y,O]_p with O in
/// that coordinate's level.
ProductBase product_base(const ProductSpec& spec);
/// As product_base with the cylinders [Z,O] = {f : f(y) in O_y for y in Z},
/// Z ranging over the family. The space carries the topology they generate.
ProductBase uc_subbase(const ProductSpec& spec, const ZFamily& z);
/// The Z-open topology on X^Y from the sets [Z,O]_co = {f : f(Z) inside O},
/// O open in X, as a single level "co". Every factor must be the same
/// space. Throws std::logic_error if the result is not contained in the
/// matching uc topology.
ProductBase compact_open_subbase(const ProductSpec& spec, const ZFamily& z);

/// Every open of a is open in b (same labels required).
bool lattice_contained(const FinSpace& a, const FinSpace& b);

/// Coordinate net y -> f_n(y) of a net on the tuple space.
LassoNet project(const LassoNet& f, const TupleCoding& coding, std::size_t y);

struct PointwiseApproachReport {
  Verdict product;
  std::vector<Verdict> coordinates;
  bool agrees = false;  // product verdict equals the conjunction
  Verdict joint;        // the product verdict, detail naming a failing coordinate
};
/// Decides approach in the product base and in every factor. Throws
/// InputError if the nets do not live on the tuple space.
PointwiseApproachReport pointwise_approach(const LassoNet& f, const LassoNet& g, const ProductSpec& spec,
                                           const ProductBase& pb);

/// Completeness where limits must lie in `candidates` (every finite base
/// space is complete with all points allowed).
bool complete_relative(const GradedBase& base, PointSet candidates);

/// Exhaustive tier-1 checks over two-factor products of every topology with
/// at most `max_points` points.
struct ProductSuiteReport {
  struct Line {
    std::string name;
    std::uint64_t cases = 0;
    std::uint64_t violations = 0;
    std::vector<std::string> examples;
  };
  std::vector<Line> lines;
  std::uint64_t products = 0;

  bool ok() const;
  const Line& get(std::string_view name) const;
};
struct ProductSuiteBounds {
  std::size_t max_points = 3;
  std::size_t max_prefix = 0;
  std::size_t max_cycle = 2;
  /// Products with at most this many points also get nets with prefixes up to
  /// small_prefix.
  std::size_t small_product = 4;
  std::size_t small_prefix = 2;
};
/// Lines: "approach-coordinatewise", "cauchy-coordinatewise", "completeness-coordinatewise", "lsb-product",
/// "uc-power-complete", "uc-cauchy-pointwise", "zo-in-uc", "singletons-uc-eq-p",
/// "uc-eq-p", "co-eq-uc".
ProductSuiteReport product_theorem_suite(const ProductSuiteBounds& bounds = {});

struct ProductUStructure {
  UStructureFin structure;
  TupleCoding carrier_coding;
  TupleCoding aux_coding;
  /// induced_topology of the product equals the product of the factor
  /// induced topologies.
  bool topology_matches = false;
};
/// u((x),(x')) = (u_y(x_y, x'_y)) into the product aux space; radii are the
/// cylinders [F,eps]_p for nonempty F, closed under intersection. Carrier
/// capped at 16 points, aux at 64.
ProductUStructure product_u_structure(const std::vector<UStructureFin>& factors);

// Tier 2: sequences of real functions given by expressions in n and t.

/// [lo, hi] with either end optionally open.
struct Region {
  Rational lo = 0;
  Rational hi = 1;
  bool lo_open = false;
  bool hi_open = false;

  bool contains(const Rational& t) const;
  /// lo + (hi - lo) i / g for i = 0..g, open ends dropped.
  std::vector<Rational> grid(std::size_t g) const;
  std::string text() const;
};

struct FunctionSeq {
  Expr term;                    // in n and t
  std::optional<Expr> modulus;  // continuity modulus delta_n(k), in n and k
  std::string name;

  Interval at(std::size_t n, const Rational& t, unsigned bits = 64) const;
};

struct UcSchedule {
  std::size_t max_index = 20;  // N
  std::size_t grid = 64;
  std::size_t refine = 4;      // holds is checked on the grid refined by this factor
  std::size_t zoom_rounds = 48;
  std::size_t bisections = 40;
  unsigned bits = 64;
};

/// Holds at level k: some alpha <= N has |f_n(t) - f(t)| <= 2^-(k+1) at every
/// refined-grid t for all n in [alpha, N] (alpha is the least such). Fails: a
/// certified t with |f_N(t) - f(t)| >= 2^-(k-1), found by grid search,
/// zooming on the worst point and bisection towards the threshold crossing,
/// so no alpha <= N works. Unknown otherwise.
struct UcResult {
  Status status = Status::Unknown;
  std::size_t level = 0;
  std::size_t alpha = 0;
  std::size_t index = 0;
  Rational witness;
  Interval deviation;
  Rational sup_lower;  // largest certified deviation lower bound seen at N
  std::size_t evaluations = 0;
  std::string detail;
};
UcResult uniform_convergence_check(const FunctionSeq& seq, const Expr& limit, const Region& z, std::size_t k,
                                   const UcSchedule& schedule = {});

/// Per-grid-point cauchy checks of n -> f_n(t) against a claimed modulus
/// m(k), an expression in k and t. Terms must evaluate exactly.
struct PointwiseCauchyResult {
  Status status = Status::Holds;
  std::vector<Rational> points;
  std::vector<CauchyCheckResult> per_point;
  std::optional<Rational> witness;
};
PointwiseCauchyResult pointwise_cauchy_check(const FunctionSeq& seq, const Expr& modulus, const Region& z,
                                             std::size_t grid, std::size_t horizon, std::size_t max_level = 32);

/// Tier-1: every uc-cauchy net on (X^Y, tau_uc) is pointwise cauchy.
struct ImplicationReport {
  std::uint64_t cases = 0;
  std::uint64_t premise = 0;
  std::uint64_t violations = 0;
  std::vector<std::string> examples;
};
ImplicationReport uc_cauchy_implies_pointwise(const ProductSpec& power, std::size_t max_prefix, std::size_t max_cycle);

/// For each level k <= max_level: uniform convergence at level k+1 gives
/// alpha(k+1); the limit modulus is delta_f(k) = delta_{alpha(k+1)}(k+1).
/// The supplied modulus of f_alpha is spot-checked at level k+1 and the
/// limit's at level k, on pairs (s, s +- theta delta) over the grid.
struct RegularityLevel {
  std::size_t level = 0;
  std::size_t alpha = 0;
  Rational delta;
  std::size_t pairs = 0;
  std::size_t factor_violations = 0;
  std::size_t limit_violations = 0;
  std::string first_violation;
};
struct RegularityReport {
  std::vector<RegularityLevel> levels;
  bool ok() const;
};
/// Throws PreconditionUnmet if the sequence has no modulus or uniform
/// convergence is not established at some level.
RegularityReport limit_regularity_suite(const FunctionSeq& seq, const Expr& limit, const Region& z,
                                        std::size_t max_level, const UcSchedule& schedule = {});

}  // namespace basespace
