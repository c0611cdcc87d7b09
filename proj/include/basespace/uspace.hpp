#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "basespace/approach.hpp"
#include "basespace/presentation.hpp"
#include "basespace/space.hpp"

namespace basespace {

/// Binary relation on points 0..n-1, stored as rows: rows[x] = {y : x R y}.
struct Relation {
  std::vector<PointSet> rows;

  static Relation diagonal(std::size_t n);
  static Relation full(std::size_t n);
  std::size_t size() const { return rows.size(); }
  bool contains(Point x, Point y) const { return rows.at(x).contains(y); }
  bool subset_of(const Relation& o) const;
  Relation inverse() const;
  /// {(a, b) : a R c and c S b for some c}.
  Relation compose(const Relation& s) const;
  Relation operator&(const Relation& o) const;
  friend bool operator==(const Relation&, const Relation&) = default;
};

/// u: X x X -> Z given by a table of Z points, with radii E open in Z.
struct UStructureFin {
  SpaceRef carrier;
  SpaceRef aux;
  std::vector<std::vector<Point>> table;
  std::vector<PointSet> radii;

  Point u(Point x, Point y) const { return table.at(x).at(y); }
};

/// Throws InputError on a partial table, a radius that is not open in the
/// aux space, or radii not closed under pairwise intersection.
void check_ustructure(const UStructureFin& s);

PointSet ball(const UStructureFin& s, Point x, std::size_t radius);
/// u^{-1}(eps) as a relation on the carrier.
Relation preimage_relation(const UStructureFin& s, std::size_t radius);
/// The topology whose opens contain a ball around each of their points.
/// Carrier labels are kept.
FinSpace induced_topology(const UStructureFin& s);
bool is_u_space(const UStructureFin& s);

/// First radius (by index) with no eps' such that R' o R' is inside R and
/// u(R' o R') is itself a radius; nullopt when the halving condition holds.
std::optional<std::size_t> halving_failure(const UStructureFin& s);
/// First radius with no eps' such that R' is inside R^{-1}.
std::optional<std::size_t> symmetry_failure(const UStructureFin& s);
bool radii_intersection_closed(const UStructureFin& s);

/// {x : some ball around x lies in A}. Throws PreconditionUnmet naming the
/// radius at which the halving condition fails.
PointSet interior_via_balls(const UStructureFin& s, PointSet a);

/// One level "r<i>" per radius holding the induced-topology interiors of the
/// balls of that radius (raw balls when `raw_balls`; those must be open).
GradedBase induced_base(const UStructureFin& s, bool raw_balls = false);

struct LsbSufficientReport {
  bool intersection_closed = false;
  std::optional<std::size_t> halving_failure;
  std::optional<std::size_t> symmetry_failure;
  ValidationReport base_validation;
  Verdict lsb;

  /// Every ball contains its centre. Not one of the listed conditions, but
  /// without it the balls need not form a base at all.
  bool centred = false;

  bool conditions_hold() const { return intersection_closed && !halving_failure && !symmetry_failure; }
  /// False only if the conditions hold, the balls form a valid base and that
  /// base is not lsb.
  bool consistent() const { return !conditions_hold() || !base_validation.ok() || lsb.holds(); }
};
LsbSufficientReport lsb_sufficient_check(const UStructureFin& s);

/// Equality indicator into the discrete {0,1} with the single radius {0}.
UStructureFin equality_indicator(SpaceRef carrier);
/// Z/nZ with u(x, y) = y - x and radii the subgroups generated by the given
/// divisors of n. The aux and carrier topologies are the matching coset
/// topologies.
UStructureFin cyclic_difference(std::size_t n, const std::vector<std::size_t>& divisors);

struct UniformityFin {
  SpaceRef carrier;
  std::vector<Relation> entourages;
};

/// Checks the diagonal, halving, symmetry and filter-base axioms. Throws
/// InputError.
void check_uniformity(const UniformityFin& u);
/// Opens are the sets containing an entourage ball around each point.
FinSpace uniform_topology(const std::vector<std::string>& labels, const std::vector<Relation>& entourages);
/// Levels "U<i>" holding the interiors of B_U(x). The carrier must carry the
/// uniform topology (InputError otherwise).
GradedBase standard_base(const UniformityFin& u, bool raw_balls = false);
/// The identity u-structure: Z = X x X (discrete) and radii the entourages
/// closed under intersection.
UStructureFin ustructure_from_uniformity(const UniformityFin& u);

/// Tier 2: checks u(s_i, s_j) in eps_level over the window [ceil(H/2), H].
struct UCauchyResult {
  Status status = Status::Unknown;
  std::size_t window_start = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  std::string detail;
};
UCauchyResult u_cauchy_check(const std::function<Rational(std::size_t)>& seq, const DensePresentation& p,
                             std::size_t horizon, std::size_t level);

}  // namespace basespace
