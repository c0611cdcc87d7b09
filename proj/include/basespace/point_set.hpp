#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <vector>

namespace basespace {

using Point = std::size_t;

/// Subset of the points of a finite space, stored as a bitmask over point
/// indices. Spaces up to 64 points can be represented.
class PointSet {
 public:
  static constexpr std::size_t kMaxPoints = 64;

  constexpr PointSet() = default;
  constexpr explicit PointSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr PointSet full(std::size_t n) {
    return PointSet(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }
  static constexpr PointSet singleton(Point p) { return PointSet(std::uint64_t{1} << p); }
  static PointSet of(std::initializer_list<Point> pts) {
    PointSet s;
    for (Point p : pts) s.insert(p);
    return s;
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(Point p) const { return (bits_ >> p) & 1U; }
  constexpr void insert(Point p) { bits_ |= std::uint64_t{1} << p; }
  constexpr void erase(Point p) { bits_ &= ~(std::uint64_t{1} << p); }

  constexpr bool subset_of(PointSet o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr bool intersects(PointSet o) const { return (bits_ & o.bits_) != 0; }

  constexpr PointSet operator|(PointSet o) const { return PointSet(bits_ | o.bits_); }
  constexpr PointSet operator&(PointSet o) const { return PointSet(bits_ & o.bits_); }
  constexpr PointSet minus(PointSet o) const { return PointSet(bits_ & ~o.bits_); }
  constexpr PointSet& operator|=(PointSet o) { bits_ |= o.bits_; return *this; }
  constexpr PointSet& operator&=(PointSet o) { bits_ &= o.bits_; return *this; }

  /// Lowest point index in the set; undefined on the empty set.
  constexpr Point first() const { return static_cast<Point>(std::countr_zero(bits_)); }

  std::vector<Point> points() const {
    std::vector<Point> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(static_cast<Point>(std::countr_zero(b)));
    return out;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) f(static_cast<Point>(std::countr_zero(b)));
  }

  friend constexpr bool operator==(PointSet, PointSet) = default;

  /// Canonical order: (cardinality, numeric bitmask).
  friend constexpr bool canonical_less(PointSet a, PointSet b) {
    auto ca = a.size(), cb = b.size();
    return ca != cb ? ca < cb : a.bits_ < b.bits_;
  }

 private:
  std::uint64_t bits_ = 0;
};

struct CanonicalLess {
  constexpr bool operator()(PointSet a, PointSet b) const { return canonical_less(a, b); }
};

}  // namespace basespace

template <>
struct std::hash<basespace::PointSet> {
  std::size_t operator()(basespace::PointSet s) const noexcept { return std::hash<std::uint64_t>{}(s.bits()); }
};
