#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "basespace/space.hpp"

namespace basespace {

/// Eventually periodic sequence: the prefix is read once, then the cycle
/// repeats forever.
template <typename T>
struct Lasso {
  std::vector<T> prefix;
  std::vector<T> cycle;

  const T& at(std::size_t n) const {
    if (n < prefix.size()) return prefix[n];
    return cycle[(n - prefix.size()) % cycle.size()];
  }

  friend bool operator==(const Lasso&, const Lasso&) = default;
};

using LassoNet = Lasso<Point>;

LassoNet constant_net(Point x);
/// Shortest equivalent encoding: primitive cycle, then shortest prefix.
LassoNet normalize(const LassoNet& u);
/// Throws InputError on an empty cycle or a point outside [0, n).
void check_net(const LassoNet& u, std::size_t n);

PointSet recurrent_set(const LassoNet& u);
/// Values u_n for n >= from (a tail set), computed by unrolling.
PointSet tail_set(const LassoNet& u, std::size_t from);

/// Monotone cofinal index map n -> start + sum of the first n increments.
struct SubnetSpec {
  std::size_t start = 0;
  Lasso<std::size_t> increments{{}, {1}};

  std::size_t index(std::size_t n) const;
};

void check_subnet(const SubnetSpec& phi);
LassoNet compose_subnet(const LassoNet& u, const SubnetSpec& phi);

/// Every tail of v contains a tail of u.
bool is_aa_subnet(const LassoNet& u, const LassoNet& v);

/// Principal filter generated by `core`.
struct FinFilter {
  SpaceRef space;
  PointSet core;
  bool tau_derived = false;

  bool contains(PointSet a) const { return core.subset_of(a); }
  /// F refines G when every member of G is a member of F.
  bool refines(const FinFilter& g) const { return core.subset_of(g.core); }
};

FinFilter derived_filter(const LassoNet& u, SpaceRef space);

/// Sampled derived nets of F. Each sample walks a chain of members from the
/// full set down to the core and selects one point per member; the chain
/// ends at the core, which repeats. Sample 0 is the canonical net that
/// constantly picks the lowest point of the core.
std::vector<LassoNet> filter_derived_net_samples(const FinFilter& f, std::size_t count, std::uint64_t seed);

/// Eventually periodic net on N x N (product order). Row classes are
/// 0..row_prefix-1 followed by the row cycle, and likewise for columns.
struct LassoBiNet {
  std::size_t row_prefix = 0;
  std::size_t col_prefix = 0;
  std::vector<std::vector<Point>> table;

  std::size_t rows() const { return table.size(); }
  std::size_t cols() const { return table.empty() ? 0 : table.front().size(); }
  std::size_t row_cycle() const { return rows() - row_prefix; }
  std::size_t col_cycle() const { return cols() - col_prefix; }
  std::size_t row_class(std::size_t i) const { return i < row_prefix ? i : row_prefix + (i - row_prefix) % row_cycle(); }
  std::size_t col_class(std::size_t j) const { return j < col_prefix ? j : col_prefix + (j - col_prefix) % col_cycle(); }
  Point at(std::size_t i, std::size_t j) const { return table[row_class(i)][col_class(j)]; }

  /// The net i -> at(i, j) for a column class j.
  LassoNet column(std::size_t j) const;
};

void check_binet(const LassoBiNet& u, std::size_t n);
/// Values on the eventual (cycle x cycle) block.
PointSet recurrent_set(const LassoBiNet& u);

std::string format_net(const FinSpace& space, const LassoNet& u);

}  // namespace basespace
