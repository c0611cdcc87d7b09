#include "doctest.h"

#include "basespace/space.hpp"

using namespace basespace;

namespace {

SpaceRef sierpinski() { return std::make_shared<const FinSpace>(FinSpace::sierpinski()); }

GradedBase sierpinski_base() {
  auto s = sierpinski();
  return GradedBase(s, {{"e0", {*s->open_index(PointSet::of({0})), *s->open_index(PointSet::of({0, 1}))}}});
}

// Counts topologies on n points by checking every family of subsets for
// the lattice axioms directly.
std::size_t count_topologies_by_families(std::size_t n) {
  const std::uint64_t subsets = std::uint64_t{1} << n;
  const std::uint64_t full = subsets - 1;
  std::size_t count = 0;
  // Families always contain the empty set and the full set; the remaining
  // subsets 1..full-1 are chosen freely.
  const std::uint64_t free = subsets - 2;
  for (std::uint64_t fam = 0; fam < (std::uint64_t{1} << free); ++fam) {
    auto in = [&](std::uint64_t s) { return s == 0 || s == full || ((fam >> (s - 1)) & 1U); };
    bool ok = true;
    for (std::uint64_t a = 1; a < full && ok; ++a)
      for (std::uint64_t b = a + 1; b < full && ok; ++b)
        if (in(a) && in(b)) ok = in(a | b) && in(a & b);
    count += ok;
  }
  return count;
}

bool hausdorff_by_opens(const FinSpace& s) {
  for (Point x = 0; x < s.point_count(); ++x)
    for (Point y = x + 1; y < s.point_count(); ++y) {
      bool sep = false;
      for (PointSet a : s.opens())
        for (PointSet b : s.opens())
          sep = sep || (a.contains(x) && b.contains(y) && !a.intersects(b));
      if (!sep) return false;
    }
  return true;
}

bool regular_by_opens(const FinSpace& s) {
  for (Point x = 0; x < s.point_count(); ++x)
    for (PointSet o : s.opens()) {
      if (!o.contains(x)) continue;
      bool found = false;
      for (PointSet u : s.opens()) found = found || (u.contains(x) && closure(s, u).subset_of(o));
      if (!found) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("sierpinski validates and has the expected kernels") {
  auto b = sierpinski_base();
  CHECK(validate(b).ok());
  CHECK(b.kernel("a") == PointSet::of({0}));
  CHECK(b.kernel("b") == PointSet::of({0, 1}));
}

TEST_CASE("validation reports non-covers, missing full set and bad indices") {
  auto s = sierpinski();
  GradedBase partial(s, {{"e0", {*s->open_index(PointSet::of({0}))}}});
  auto r = validate(partial);
  CHECK(r.has("non-cover"));

  FinSpace broken({"a", "b"}, {PointSet{}, PointSet::of({0}), PointSet::of({1})});
  CHECK(validate(broken).has("topology"));

  GradedBase dangling(s, {{"e0", {7}}});
  auto rd = validate(dangling);
  CHECK(rd.has("base-index"));
  CHECK(rd.has("empty-level"));
}

TEST_CASE("discrete kernels are singletons") {
  auto d = std::make_shared<const FinSpace>(FinSpace::discrete(3));
  auto b = kernel_base(d);
  CHECK(validate(b).ok());
  CHECK(b.kernel(1) == PointSet::of({1}));
}

TEST_CASE("interior, closure and nowhere density") {
  auto s = FinSpace::sierpinski();
  PointSet b = PointSet::of({1});
  CHECK(interior(s, b).empty());
  CHECK(closure(s, b) == b);
  CHECK(is_nowhere_dense(s, b));
  CHECK(interior(s, s.full()) == s.full());
  CHECK(closure(s, s.full()) == s.full());
  CHECK_FALSE(is_nowhere_dense(s, s.full()));
  CHECK(is_nowhere_dense(s, PointSet{}));
}

TEST_CASE("separation predicates") {
  CHECK(is_hausdorff(FinSpace::discrete(3)));
  CHECK(is_regular(FinSpace::discrete(3)));
  CHECK_FALSE(is_hausdorff(FinSpace::sierpinski()));
  CHECK(is_regular(FinSpace::indiscrete(2)));
  CHECK_FALSE(is_hausdorff(FinSpace::indiscrete(2)));
}

TEST_CASE("separation predicates agree with brute force over opens") {
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& t : enumerate_topologies(n)) {
      CHECK(is_hausdorff(t) == hausdorff_by_opens(t));
      CHECK(is_regular(t) == regular_by_opens(t));
    }
}

TEST_CASE("hausdorffize") {
  auto ind = std::make_shared<const FinSpace>(FinSpace::indiscrete(2));
  auto h = hausdorffize(open_base(ind));
  CHECK(h.space->point_count() == 1);
  CHECK(h.quotient.table == std::vector<Point>{0, 0});

  auto d = std::make_shared<const FinSpace>(FinSpace::discrete(3));
  auto hd = hausdorffize(kernel_base(d));
  CHECK(hd.space->point_count() == 3);
  CHECK(hd.quotient.table == std::vector<Point>{0, 1, 2});

  auto hs = hausdorffize(sierpinski_base());
  CHECK(hs.space->point_count() == 2);
  CHECK(validate(hs.base).ok());
}

TEST_CASE("hausdorffize output is Hausdorff exactly when its kernel preorder is trivial") {
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& t : enumerate_topologies(n)) {
      auto h = hausdorffize(kernel_base(std::make_shared<const FinSpace>(t)));
      CHECK(validate(h.base).ok());
      CHECK(is_continuous(h.quotient));
      bool trivial = true;
      for (Point x = 0; x < h.space->point_count(); ++x) trivial = trivial && h.base.kernel(x).size() == 1;
      CHECK(is_hausdorff(*h.space) == trivial);
    }
}

TEST_CASE("continuity") {
  auto s = sierpinski();
  CHECK(is_continuous(SpaceMap{s, s, {0, 1}}));
  CHECK(is_continuous(SpaceMap{s, s, {1, 1}}));
  CHECK_FALSE(is_continuous(SpaceMap{s, s, {1, 0}}));
}

TEST_CASE("continuity routes agree on all maps between spaces up to 3 points") {
  // is_continuous throws if its two routes disagree.
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t m = 1; m <= 3; ++m) {
      auto src = enumerate_topologies(n), tgt = enumerate_topologies(m);
      for (const auto& a : src)
        for (const auto& b : tgt) {
          auto ar = std::make_shared<const FinSpace>(a), br = std::make_shared<const FinSpace>(b);
          std::size_t maps = 1;
          for (std::size_t i = 0; i < n; ++i) maps *= m;
          for (std::size_t code = 0; code < maps; ++code) {
            std::vector<Point> table;
            for (std::size_t i = 0, c = code; i < n; ++i, c /= m) table.push_back(c % m);
            CHECK_NOTHROW(is_continuous(SpaceMap{ar, br, table}));
          }
        }
    }
}

TEST_CASE("continuity routes agree on self maps of 4-point spaces") {
  std::size_t checked = 0;
  for (const auto& t : enumerate_topologies(4)) {
    auto r = std::make_shared<const FinSpace>(t);
    for (std::size_t code = 0; code < 256; code += 7) {
      std::vector<Point> table;
      for (std::size_t i = 0, c = code; i < 4; ++i, c /= 4) table.push_back(c % 4);
      is_continuous(SpaceMap{r, r, table});
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("topology enumeration matches family enumeration") {
  for (std::size_t n = 1; n <= 4; ++n) CHECK(enumerate_topologies(n).size() == count_topologies_by_families(n));
  CHECK(enumerate_topologies(3).size() == 29);
  CHECK(enumerate_topologies(4).size() == 355);
}

TEST_CASE("kernel is open, contains the point and does not depend on the base") {
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& t : enumerate_topologies(n)) {
      auto r = std::make_shared<const FinSpace>(t);
      auto kb = kernel_base(r), ob = open_base(r), sb = regrade_split(kb);
      REQUIRE(validate(kb).ok());
      REQUIRE(validate(ob).ok());
      REQUIRE(validate(sb).ok());
      for (Point x = 0; x < n; ++x) {
        CHECK(t.is_open(kb.kernel(x)));
        CHECK(kb.kernel(x).contains(x));
        CHECK(kb.kernel(x) == ob.kernel(x));
        CHECK(kb.kernel(x) == sb.kernel(x));
      }
    }
}

TEST_CASE("subbase closure") {
  std::vector<PointSet> sub{PointSet::of({0, 1}), PointSet::of({1, 2})};
  auto t = FinSpace::from_subbase({"a", "b", "c"}, sub);
  CHECK(validate(t).ok());
  CHECK(t.is_open(PointSet::of({1})));
  CHECK(t.opens().size() == 5);
}
