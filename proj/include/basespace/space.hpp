#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "basespace/point_set.hpp"

namespace basespace {

/// Thrown when an operation receives input it cannot interpret (unknown
/// labels, out-of-range indices, malformed documents).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when an operation's hypothesis does not hold for the given input.
class PreconditionUnmet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A finite space: labelled points plus a family of open sets kept in
/// canonical (cardinality, bitmask) order. Construction never rejects a
/// family that is not a topology; `validate` reports that.
class FinSpace {
 public:
  FinSpace() = default;
  FinSpace(std::vector<std::string> labels, std::vector<PointSet> opens);

  /// Closes `subbase` under finite intersection and arbitrary union (adding
  /// the empty set and the full set).
  static FinSpace from_subbase(std::vector<std::string> labels, std::span<const PointSet> subbase);
  /// Points labelled "0", "1", ...
  static std::vector<std::string> numeric_labels(std::size_t n);

  static FinSpace discrete(std::size_t n);
  static FinSpace indiscrete(std::size_t n);
  /// Points a, b with opens {}, {a}, {a,b}.
  static FinSpace sierpinski();

  std::size_t point_count() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(Point p) const { return labels_.at(p); }
  Point point(std::string_view label) const;
  std::optional<Point> find_point(std::string_view label) const;

  const std::vector<PointSet>& opens() const { return opens_; }
  std::optional<std::size_t> open_index(PointSet s) const;
  bool is_open(PointSet s) const { return open_set_.contains(s); }
  PointSet full() const { return PointSet::full(labels_.size()); }

  /// Intersection of every open set containing `p`.
  PointSet minimal_open(Point p) const { return minimal_.at(p); }
  /// Smallest open set containing `s` (the union of the minimal opens).
  PointSet open_hull(PointSet s) const;

  friend bool operator==(const FinSpace& a, const FinSpace& b) {
    return a.labels_ == b.labels_ && a.opens_ == b.opens_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<PointSet> opens_;
  std::unordered_set<PointSet> open_set_;
  std::vector<PointSet> minimal_;
};

using SpaceRef = std::shared_ptr<const FinSpace>;

struct BaseLevel {
  std::string label;
  std::vector<std::size_t> members;  // indices into space->opens()
};

/// A base of the topology partitioned into open covers, one per level label.
class GradedBase {
 public:
  GradedBase() = default;
  GradedBase(SpaceRef space, std::vector<BaseLevel> levels);

  const FinSpace& space() const { return *space_; }
  const SpaceRef& space_ref() const { return space_; }
  const std::vector<BaseLevel>& levels() const { return levels_; }
  /// Member sets of level `level`, in the level's declared order.
  std::vector<PointSet> members(std::size_t level) const;
  /// Every base member together with the level it belongs to.
  struct Member {
    std::size_t level;
    std::size_t open_index;
    PointSet set;
  };
  const std::vector<Member>& all_members() const { return all_; }

  /// Intersection of the base members containing `p`.
  PointSet kernel(Point p) const { return kernels_.at(p); }
  PointSet kernel(std::string_view label) const { return kernel(space_->point(label)); }

  bool indices_in_range() const { return indices_ok_; }

 private:
  SpaceRef space_;
  std::vector<BaseLevel> levels_;
  std::vector<Member> all_;
  std::vector<PointSet> kernels_;
  bool indices_ok_ = true;
};

struct ValidationIssue {
  std::string kind;  // "topology", "base-index", "empty-level", "non-cover", "non-base", "labels"
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  bool has(std::string_view kind) const;
};

ValidationReport validate(const FinSpace& space);
ValidationReport validate(const GradedBase& base);

PointSet interior(const FinSpace& space, PointSet a);
PointSet closure(const FinSpace& space, PointSet a);
bool is_nowhere_dense(const FinSpace& space, PointSet a);
bool is_hausdorff(const FinSpace& space);
bool is_regular(const FinSpace& space);

/// A map between finite spaces given by a point table.
struct SpaceMap {
  SpaceRef source;
  SpaceRef target;
  std::vector<Point> table;

  Point operator()(Point p) const { return table.at(p); }
  PointSet image(PointSet s) const;
  PointSet preimage(PointSet s) const;
};

/// Throws InputError if the table is not a total map into the target.
void check_map(const SpaceMap& f);
bool is_continuous(const SpaceMap& f);

struct Hausdorffization {
  SpaceRef space;
  GradedBase base;
  SpaceMap quotient;
};

/// Quotient by "same base neighbourhoods". Members that coincide after the
/// quotient are merged within their level.
Hausdorffization hausdorffize(const GradedBase& base);

/// Every topology on `n` labelled points (n <= 5), in a fixed order.
std::vector<FinSpace> enumerate_topologies(std::size_t n);

/// Single level "e0" holding the distinct minimal open sets.
GradedBase kernel_base(SpaceRef space);
/// Single level "e0" holding every nonempty open set.
GradedBase open_base(SpaceRef space);
/// Same members as `base`, one level per member, each level completed to a
/// cover by adding the full set.
GradedBase regrade_split(const GradedBase& base);

std::string format_set(const FinSpace& space, PointSet s);

}  // namespace basespace
