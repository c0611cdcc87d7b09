#include "doctest.h"

#include "basespace/approach.hpp"

using namespace basespace;

namespace {

SpaceRef share(FinSpace s) { return std::make_shared<const FinSpace>(std::move(s)); }

GradedBase sierpinski_base() {
  auto s = share(FinSpace::sierpinski());
  return GradedBase(s, {{"e0", {*s->open_index(PointSet::of({0})), *s->open_index(PointSet::of({0, 1}))}}});
}

LassoNet cyc(std::vector<Point> c) { return LassoNet{{}, std::move(c)}; }

// lsb read straight off its definition over nets with cycle <= 2: a net
// converging to x is approached by the constant net at x.
bool lsb_by_nets(const GradedBase& b) {
  const auto nets = enumerate_nets(b.space().point_count(), 1, 2);
  for (const auto& u : nets)
    for (Point x = 0; x < b.space().point_count(); ++x)
      if (converges(u, x, b).holds() && !approaches(constant_net(x), u, b).holds()) return false;
  return true;
}

bool sb_by_nets(const GradedBase& b) {
  const auto nets = enumerate_nets(b.space().point_count(), 1, 2);
  for (const auto& u : nets)
    for (const auto& v : nets)
      if (approaches(u, v, b).holds() && !approaches(v, u, b).holds()) return false;
  return true;
}

bool csb_by_nets(const GradedBase& b) {
  const auto nets = enumerate_nets(b.space().point_count(), 1, 2);
  for (const auto& u : nets)
    for (const auto& v : nets)
      if (is_cauchy(v, b).holds() && approaches(u, v, b).holds() && !approaches(v, u, b).holds()) return false;
  return true;
}

}  // namespace

TEST_CASE("approach examples") {
  auto ind = open_base(share(FinSpace::indiscrete(2)));
  CHECK(approaches(cyc({0, 1}), cyc({1}), ind).holds());

  auto s = sierpinski_base();
  auto v = approaches(cyc({1}), cyc({0}), s);
  REQUIRE_FALSE(v.holds());
  CHECK(format_witness(s, *v.witness) == "(e0, a, {a}, b)");
  CHECK(replay_witness(cyc({1}), cyc({0}), s, *v.witness));
  CHECK(approaches(cyc({0}), cyc({1}), s).holds());
}

TEST_CASE("convergence and limits") {
  auto d = kernel_base(share(FinSpace::discrete(2)));
  auto ind = open_base(share(FinSpace::indiscrete(2)));
  CHECK(converges(constant_net(1), 1, d).holds());
  CHECK(limits(cyc({0, 1}), ind) == PointSet::of({0, 1}));
  CHECK(limits(cyc({0, 1}), d).empty());
}

TEST_CASE("cauchy nets") {
  auto d = kernel_base(share(FinSpace::discrete(2)));
  auto ind = open_base(share(FinSpace::indiscrete(2)));
  auto v = is_cauchy(cyc({0, 1}), d);
  REQUIRE_FALSE(v.holds());
  CHECK(v.witness->excluded != v.witness->recurrent);
  CHECK(is_cauchy(cyc({0, 1}), ind).holds());
  CHECK(is_cauchy(LassoNet{{0, 1}, {1}}, d).holds());
}

TEST_CASE("every failing verdict replays and the oracle agrees on small spaces") {
  for (std::size_t n = 1; n <= 2; ++n)
    for (const auto& t : enumerate_topologies(n)) {
      auto b = kernel_base(share(t));
      auto nets = enumerate_nets(n, 1, 3);
      for (const auto& u : nets)
        for (const auto& v : nets) {
          auto k = approaches(u, v, b);
          auto o = approaches_oracle(u, v, b);
          CHECK(k.holds() == o.holds());
          CHECK(o.method == Method::BruteForceOracle);
          if (!k.holds()) {
            CHECK(replay_witness(u, v, b, *k.witness));
            CHECK(replay_witness(u, v, b, *o.witness));
          }
        }
    }
}

TEST_CASE("replay rejects a doctored witness") {
  auto s = sierpinski_base();
  auto v = approaches(cyc({1}), cyc({0}), s);
  Witness w = *v.witness;
  w.excluded = 0;
  CHECK_FALSE(replay_witness(cyc({1}), cyc({0}), s, w));
}

TEST_CASE("classification") {
  auto s = sierpinski_base();
  auto c = classify_base(s);
  CHECK_FALSE(c.lsb.holds());
  CHECK_FALSE(c.csb.holds());
  CHECK_FALSE(c.sb.holds());
  REQUIRE(c.lsb.nets.size() == 2);
  CHECK(converges(c.lsb.nets[0], c.lsb.nets[1].cycle[0], s).holds());
  CHECK_FALSE(approaches(c.lsb.nets[1], c.lsb.nets[0], s).holds());

  auto d = classify_base(kernel_base(share(FinSpace::discrete(3))));
  CHECK((d.lsb.holds() && d.csb.holds() && d.sb.holds()));
  auto i = classify_base(open_base(share(FinSpace::indiscrete(3))));
  CHECK((i.lsb.holds() && i.csb.holds() && i.sb.holds()));
}

TEST_CASE("classification matches the definitions over nets") {
  for (std::size_t n = 1; n <= 3; ++n)
    for (const auto& t : enumerate_topologies(n)) {
      auto b = kernel_base(share(t));
      auto c = classify_base(b);
      CHECK(c.lsb.holds() == lsb_by_nets(b));
      CHECK(c.csb.holds() == csb_by_nets(b));
      CHECK(c.sb.holds() == sb_by_nets(b));
    }
}

TEST_CASE("uniform maps between finite spaces are the continuous ones") {
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t m = 1; m <= 3; ++m)
      for (const auto& a : enumerate_topologies(n))
        for (const auto& bt : enumerate_topologies(m)) {
          auto ar = share(a), br = share(bt);
          auto sa = kernel_base(ar), sb = kernel_base(br);
          std::size_t maps = 1;
          for (std::size_t i = 0; i < n; ++i) maps *= m;
          for (std::size_t code = 0; code < maps; ++code) {
            std::vector<Point> table;
            for (std::size_t i = 0, c = code; i < n; ++i, c /= m) table.push_back(c % m);
            SpaceMap f{ar, br, table};
            auto u = is_uniform(f, sa, sb);
            CHECK(u.holds() == is_continuous(f));
            if (!u.holds()) {
              // The witness pair approaches, its image does not.
              CHECK(approaches(u.nets[0], u.nets[1], sa).holds());
              CHECK_FALSE(approaches(LassoNet{{}, {f(u.nets[0].cycle[0])}}, LassoNet{{}, {f(u.nets[1].cycle[0])}}, sb)
                              .holds());
            }
          }
        }
}

TEST_CASE("finite spaces are complete, precompact and compact") {
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& t : enumerate_topologies(n)) {
      auto b = kernel_base(share(t));
      CHECK(is_complete(b).holds());
      CHECK(is_precompact(b).holds());
      CHECK(is_compact(t).holds());
    }
}

TEST_CASE("baire") {
  CHECK(check_baire(kernel_base(share(FinSpace::discrete(3)))).holds());
  auto s = check_baire(sierpinski_base());
  CHECK(s.status == Status::PreconditionUnmet);
  CHECK(s.detail == "not Hausdorff");
  CHECK(check_baire(kernel_base(share(FinSpace::discrete(1)))).holds());
}

TEST_CASE("axiom suite on Sierpinski") {
  SuiteBounds bounds;
  bounds.max_cycle = 2;
  auto r = run_axiom_suite(sierpinski_base(), bounds);
  CHECK_FALSE(r.partial);
  CHECK(r.get("constant-restriction").counterexamples == 0);
  CHECK(r.get("heredity").counterexamples == 0);
  CHECK(r.get("transitivity").counterexamples == 0);
  CHECK(r.get("tail-exclusion").counterexamples == 0);
  CHECK(r.get("filter-monotonicity").counterexamples == 0);
  // Marginal convergence breaks without local symmetry: the constant bi-net
  // at a has columns converging to b, and the constant net at b does not
  // approach the constant net at a.
  const auto& m = r.get("marginal-convergence");
  CHECK(m.cases > 0);
  CHECK(m.counterexamples > 0);
  CHECK_FALSE(approaches(constant_net(1), constant_net(0), sierpinski_base()).holds());
}

TEST_CASE("axiom suite passes on lsb spaces") {
  SuiteBounds bounds;
  bounds.binet_rows = bounds.binet_cols = 2;
  for (const auto& t : enumerate_topologies(3)) {
    auto b = kernel_base(share(t));
    if (!classify_base(b).lsb.holds()) continue;
    auto r = run_axiom_suite(b, bounds);
    CHECK(r.ok());
  }
}

TEST_CASE("inverted approach is caught as a transitivity failure") {
  ApproachFn inverted = [](const LassoNet& u, const LassoNet& v, const GradedBase& b) {
    return !approaches(u, v, b).holds();
  };
  SuiteBounds bounds;
  bounds.binet_rows = bounds.binet_cols = 1;
  // On Sierpinski the complement of approach happens to be transitive too.
  CHECK(run_axiom_suite(sierpinski_base(), bounds, inverted).get("transitivity").counterexamples == 0);
  auto r = run_axiom_suite(kernel_base(share(FinSpace::discrete(2))), bounds, inverted);
  CHECK(r.get("transitivity").counterexamples > 0);
  CHECK_FALSE(r.get("transitivity").examples.empty());
}

TEST_CASE("budget exhaustion flags a partial report") {
  SuiteBounds bounds;
  bounds.budget = 10;
  auto r = run_axiom_suite(sierpinski_base(), bounds);
  CHECK(r.partial);
  CHECK_FALSE(r.ok());
}

TEST_CASE("cauchy filters") {
  auto d = share(FinSpace::discrete(2));
  auto b = kernel_base(d);
  CHECK(cauchy_filter_check(FinFilter{d, PointSet::of({0}), true}, b, 4).holds());
  CHECK(cauchy_filter_check(FinFilter{d, PointSet::of({0, 1}), true}, b, 4).holds());
  for (const auto& u : enumerate_nets(2, 1, 2))
    if (is_cauchy(u, b).holds()) CHECK(cauchy_filter_check(derived_filter(u, d), b, 4).holds());
}

TEST_CASE("cauchy structures") {
  auto d = cauchy_structure(kernel_base(share(FinSpace::discrete(2))));
  CHECK(d.filters.size() == 3);
  CHECK(std::count(d.cauchy.begin(), d.cauchy.end(), true) == 3);
  CHECK(d.violations.empty());
  auto i = cauchy_structure(open_base(share(FinSpace::indiscrete(2))));
  CHECK(std::count(i.cauchy.begin(), i.cauchy.end(), true) == 3);
  CHECK(i.violations.empty());
  CHECK_THROWS_AS(cauchy_structure(sierpinski_base()), PreconditionUnmet);
}
