#include "doctest.h"

#include <chrono>
#include <cmath>

#include "basespace/funcspace.hpp"

using namespace basespace;

namespace {

SpaceRef share(FinSpace s) { return std::make_shared<const FinSpace>(std::move(s)); }

// Opens of the product counted directly: U is open iff each of its points
// has a box O1 x O2 of factor opens inside U.
std::size_t product_open_count(const FinSpace& a, const FinSpace& b) {
  const std::size_t nb = b.point_count(), n = a.point_count() * nb;
  std::size_t count = 0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    PointSet u(bits);
    bool open = true;
    u.for_each([&](Point p) {
      bool boxed = false;
      for (PointSet o1 : a.opens())
        for (PointSet o2 : b.opens()) {
          if (!o1.contains(p / nb) || !o2.contains(p % nb)) continue;
          bool inside = true;
          o1.for_each([&](Point x) { o2.for_each([&](Point y) { inside = inside && u.contains(x * nb + y); }); });
          boxed = boxed || inside;
        }
      open = open && boxed;
    });
    count += open;
  }
  return count;
}

ProductSpec two(const GradedBase& a, const GradedBase& b) {
  ProductSpec s;
  s.index_labels = {"y0", "y1"};
  s.factors = {a, b};
  return s;
}

FunctionSeq seq(const std::string& term, const std::string& modulus = "") {
  FunctionSeq f{Expr::parse(term), std::nullopt, term};
  if (!modulus.empty()) f.modulus = Expr::parse(modulus);
  return f;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

TEST_CASE("tuple coding") {
  TupleCoding c{{2, 3}};
  CHECK(c.count() == 6);
  for (Point p = 0; p < 6; ++p) {
    CHECK(c.encode(c.decode(p)) == p);
    CHECK(c.coordinate(p, 0) == p / 3);
    CHECK(c.coordinate(p, 1) == p % 3);
  }
  CHECK_THROWS_AS(c.encode({2, 0}), InputError);
}

TEST_CASE("product of two Sierpinski spaces") {
  auto s = share(FinSpace::sierpinski());
  auto pb = product_base(two(kernel_base(s), kernel_base(s)));
  const FinSpace& p = pb.base.space();
  CHECK(p.point_count() == 4);
  CHECK(p.labels() == std::vector<std::string>{"(a,a)", "(a,b)", "(b,a)", "(b,b)"});
  CHECK(p.opens().size() == product_open_count(*s, *s));
  // The opens are the up-sets of the 2x2 order.
  CHECK(p.opens().size() == 6);
  CHECK(validate(pb.base).ok());
  CHECK(p == product_space({s.get(), s.get()}));
  CHECK(pb.base.levels().size() == 1);
  CHECK(pb.base.levels()[0].label == "(e0,e0)");
}

TEST_CASE("product lattices match the direct count on all small factor pairs") {
  for (std::size_t na = 1; na <= 3; ++na)
    for (std::size_t nb = 1; nb <= 2; ++nb)
      for (const auto& a : enumerate_topologies(na))
        for (const auto& b : enumerate_topologies(nb)) {
          auto pb = product_base(two(open_base(share(a)), kernel_base(share(b))));
          REQUIRE(validate(pb.base).ok());
          CHECK(pb.base.space().opens().size() == product_open_count(a, b));
        }
}

TEST_CASE("discrete products") {
  auto d = share(FinSpace::discrete(2));
  auto d3 = share(FinSpace::discrete(3));
  auto pb = product_base(two(kernel_base(d), kernel_base(d3)));
  CHECK(pb.base.space().opens().size() == 64);
  // Single cylinders {x} x X stay in the base next to the singleton boxes.
  std::size_t singletons = 0;
  for (const auto& m : pb.base.all_members()) singletons += m.set.size() == 1;
  CHECK(singletons == 6);
  CHECK(pb.base.all_members().size() == 2 + 3 + 6);
  for (Point p = 0; p < 6; ++p) CHECK(pb.base.kernel(p) == PointSet::singleton(p));
}

TEST_CASE("multi-level factors give cartesian levels") {
  auto s = share(FinSpace::sierpinski());
  GradedBase split = regrade_split(open_base(s));
  auto pb = product_base(two(split, kernel_base(share(FinSpace::discrete(2)))));
  REQUIRE(pb.base.levels().size() == split.levels().size());
  CHECK(pb.base.levels()[0].label == "(" + split.levels()[0].label + ",e0)");
  CHECK(validate(pb.base).ok());
  CHECK(pb.base.space() == product_space({s.get(), &kernel_base(share(FinSpace::discrete(2))).space()}));
}

TEST_CASE("uniform-convergence subbases") {
  auto s = share(FinSpace::sierpinski());
  auto spec = two(kernel_base(s), open_base(share(FinSpace::discrete(2))));
  auto p = product_base(spec);
  auto single = uc_subbase(spec, ZFamily::singletons());
  CHECK(single.base.space() == p.base.space());
  CHECK(single.base.levels()[0].members == p.base.levels()[0].members);
  CHECK(uc_subbase(spec, ZFamily::whole()).base.space() == p.base.space());

  // Z = {{y0}} only constrains coordinate 0.
  auto only0 = uc_subbase(spec, ZFamily::explicit_list({PointSet::singleton(0)}));
  for (const auto& m : only0.base.all_members()) {
    PointSet first;
    m.set.for_each([&](Point q) { first.insert(only0.coding.coordinate(q, 0)); });
    for (Point q = 0; q < 4; ++q)
      CHECK(m.set.contains(q) == first.contains(only0.coding.coordinate(q, 0)));
  }
  CHECK_THROWS_AS(uc_subbase(spec, ZFamily::explicit_list({PointSet::singleton(2)})), InputError);
}

TEST_CASE("Z-open topologies") {
  for (std::size_t n = 1; n <= 3; ++n)
    for (const auto& x : enumerate_topologies(n)) {
      auto spec = ProductSpec::power(kernel_base(share(x)), {"y0", "y1"});
      auto p = product_base(spec);
      CHECK(compact_open_subbase(spec, ZFamily::singletons()).base.space() == p.base.space());
      CHECK(compact_open_subbase(spec, ZFamily::compacts()).base.space() ==
            uc_subbase(spec, ZFamily::compacts()).base.space());
      auto whole = compact_open_subbase(spec, ZFamily::whole());
      CHECK(lattice_contained(whole.base.space(), uc_subbase(spec, ZFamily::whole()).base.space()));
    }
  // One index: every topology is X's own.
  auto s = share(FinSpace::sierpinski());
  auto one = ProductSpec::power(kernel_base(s), {"y"});
  for (const ZFamily& z : {ZFamily::singletons(), ZFamily::whole(), ZFamily::compacts()}) {
    CHECK(compact_open_subbase(one, z).base.space() == *s);
    CHECK(uc_subbase(one, z).base.space() == *s);
  }
  CHECK(product_base(one).base.space() == *s);
  // Different factor spaces have no Z-open topology.
  CHECK_THROWS_AS(compact_open_subbase(two(kernel_base(s), kernel_base(share(FinSpace::discrete(2)))),
                                       ZFamily::whole()),
                  InputError);
}

TEST_CASE("the whole-power Z-open topology can be strictly coarser") {
  // With Z = {Y} only sets O x O are subbasic.
  auto d = share(FinSpace::discrete(2));
  auto spec = ProductSpec::power(kernel_base(d), {"y0", "y1"});
  auto co = compact_open_subbase(spec, ZFamily::whole());
  auto uc = uc_subbase(spec, ZFamily::whole());
  CHECK(lattice_contained(co.base.space(), uc.base.space()));
  CHECK(co.base.space().opens().size() < uc.base.space().opens().size());
}

TEST_CASE("completes family") {
  auto d = share(FinSpace::discrete(2));
  auto z = resolve(ZFamily::completes(kernel_base(d)), 2);
  CHECK(z.size() == 3);
  auto s = share(FinSpace::sierpinski());
  CHECK_THROWS_AS(resolve(ZFamily::completes(kernel_base(s)), 2), PreconditionUnmet);
  CHECK_THROWS_AS(resolve(ZFamily::completes(kernel_base(d)), 3), InputError);
  CHECK(resolve(ZFamily::compacts(), 3).size() == 7);
}

TEST_CASE("product size cap") {
  auto d = share(FinSpace::discrete(3));
  ProductSpec spec = ProductSpec::power(kernel_base(d), {"a", "b", "c"});
  CHECK_THROWS_AS(product_base(spec), InputError);
  CHECK_THROWS_AS(product_base(ProductSpec{}), InputError);
}

TEST_CASE("pointwise approach") {
  auto d = share(FinSpace::discrete(2));
  auto spec = two(kernel_base(d), kernel_base(d));
  auto pb = product_base(spec);
  // Constant nets: holds iff each coordinate approaches.
  for (Point p = 0; p < 4; ++p)
    for (Point q = 0; q < 4; ++q) {
      auto r = pointwise_approach(constant_net(p), constant_net(q), spec, pb);
      CHECK(r.agrees);
      CHECK(r.product.holds() == (p == q));
    }
  // Alternating in coordinate 0: (0,0), (1,0), ...
  LassoNet alt{{}, {pb.coding.encode({0, 0}), pb.coding.encode({1, 0})}};
  auto r = pointwise_approach(alt, constant_net(pb.coding.encode({0, 0})), spec, pb);
  CHECK(r.agrees);
  CHECK(r.product.status == Status::Fails);
  CHECK(!r.coordinates[0].holds());
  CHECK(r.coordinates[1].holds());
  CHECK(r.joint.detail.find("coordinate y0 fails") == 0);
  CHECK_THROWS_AS(pointwise_approach(constant_net(4), alt, spec, pb), InputError);
}

TEST_CASE("product approach agrees with the brute-force oracle") {
  auto s = share(FinSpace::sierpinski());
  auto i2 = share(FinSpace::indiscrete(2));
  auto spec = two(regrade_split(open_base(s)), kernel_base(i2));
  auto pb = product_base(spec);
  auto nets = enumerate_nets(4, 1, 2);
  for (const auto& f : nets)
    for (const auto& g : nets) {
      auto r = pointwise_approach(f, g, spec, pb);
      REQUIRE(r.agrees);
      CHECK(r.product.holds() == approaches_oracle(f, g, pb.base).holds());
    }
}

TEST_CASE("exhaustive product theorems on small factors") {
  ProductSuiteBounds b;
  b.max_points = 2;
  b.max_prefix = 1;
  auto rep = product_theorem_suite(b);
  CHECK(rep.products == 25);
  for (const auto& l : rep.lines) {
    INFO(l.name);
    CHECK(l.violations == 0);
    CHECK(l.cases > 0);
  }
  CHECK(rep.ok());
}

TEST_CASE("mutated candidate sets are detected") {
  auto d = share(FinSpace::discrete(2));
  CHECK(complete_relative(kernel_base(d), d->full()));
  CHECK(!complete_relative(kernel_base(d), PointSet::singleton(1)));
  // In the indiscrete space every net converges to every point.
  auto i = share(FinSpace::indiscrete(2));
  CHECK(complete_relative(kernel_base(i), PointSet::singleton(1)));
  CHECK(!complete_relative(kernel_base(i), PointSet{}));
}

TEST_CASE("uc-cauchy implies pointwise cauchy") {
  for (const auto& x : enumerate_topologies(3)) {
    auto spec = ProductSpec::power(kernel_base(share(x)), {"y0", "y1"});
    auto r = uc_cauchy_implies_pointwise(spec, 0, 2);
    CHECK(r.violations == 0);
    CHECK(r.premise > 0);
  }
}

TEST_CASE("product u-structures") {
  auto c2 = share(FinSpace::discrete(2));
  auto eq = equality_indicator(c2);
  auto p = product_u_structure({eq, eq});
  CHECK(p.topology_matches);
  CHECK(induced_topology(p.structure).opens().size() == 16);
  // Product equality indicator: u(x, x') is the all-zero tuple iff x = x'.
  const Point zero = p.aux_coding.encode({0, 0});
  for (Point x = 0; x < 4; ++x)
    for (Point y = 0; y < 4; ++y) CHECK((p.structure.u(x, y) == zero) == (x == y));
  for (Point x = 0; x < 4; ++x) {
    bool singleton = false;
    for (std::size_t r = 0; r < p.structure.radii.size(); ++r) singleton = singleton || ball(p.structure, x, r).size() == 1;
    CHECK(singleton);
  }

  auto one = product_u_structure({eq});
  CHECK(one.structure.table == eq.table);
  CHECK(*one.structure.carrier == *eq.carrier);
  CHECK(*one.structure.aux == *eq.aux);
  CHECK(one.structure.radii == eq.radii);

  // Full radius only: indiscrete factors, indiscrete product.
  UStructureFin ind = eq;
  ind.radii = {ind.aux->full()};
  auto pi = product_u_structure({ind, ind});
  CHECK(pi.topology_matches);
  CHECK(induced_topology(pi.structure).opens().size() == 2);

  auto cyc = cyclic_difference(4, {2});
  auto mixed = product_u_structure({cyc, eq});
  CHECK(mixed.topology_matches);
  CHECK(is_u_space(mixed.structure) == (is_u_space(cyc) && is_u_space(eq)));
}

TEST_CASE("t^n is not uniformly convergent on [0,1)") {
  const auto t0 = std::chrono::steady_clock::now();
  Region z{0, 1, false, true};
  for (std::size_t n : {8, 20, 64}) {
    UcSchedule sc;
    sc.max_index = n;
    auto r = uniform_convergence_check(seq("t^n"), Expr::parse("0"), z, 2, sc);
    REQUIRE(r.status == Status::Fails);
    CHECK(r.index == n);
    CHECK(z.contains(r.witness));
    // Certified: t^n >= 1/2 exactly.
    CHECK(pow_int(r.witness, n) >= Rational(1, 2));
    CHECK(std::abs(to_double(r.witness) - std::pow(2.0, -1.0 / static_cast<double>(n))) < 1e-9);
  }
  CHECK(seconds_since(t0) < 2.0);
}

TEST_CASE("exp partial sums converge uniformly to level 12") {
  const auto t0 = std::chrono::steady_clock::now();
  Region z{0, 1};
  auto r = uniform_convergence_check(seq("sum(i, 0, n, t^i / fact(i))"), Expr::parse("exp(t)"), z, 12);
  REQUIRE(r.status == Status::Holds);
  // The deviation is largest at t = 1: e - sum_{i<=n} 1/i!.
  std::size_t alpha = 0;
  for (double partial = 1, term = 1;; ++alpha) {
    if (alpha > 0) partial += term /= static_cast<double>(alpha);
    if (std::exp(1.0) - partial <= std::ldexp(1.0, -13)) break;
  }
  CHECK(r.alpha == alpha);
  // Sufficient remainder bound: n! > 3 * 2^k.
  CHECK(r.alpha <= 8);
  MESSAGE("exp uniform check: alpha " << r.alpha << ", " << seconds_since(t0) << " s");
}

TEST_CASE("uniform convergence trivia") {
  Region z{0, 1};
  for (std::size_t k : {0, 5, 30}) {
    auto r = uniform_convergence_check(seq("t^2 + 1"), Expr::parse("t^2 + 1"), z, k);
    CHECK(r.status == Status::Holds);
    CHECK(r.alpha == 0);
  }
  // 1/(n+1) sits between the thresholds: unknown.
  UcSchedule sc;
  sc.max_index = 5;
  auto u = uniform_convergence_check(seq("t + 1/(n+1)"), Expr::parse("t"), z, 3, sc);
  CHECK(u.status == Status::Unknown);
  CHECK(u.sup_lower == Rational(1, 6));
  CHECK_THROWS_AS(uniform_convergence_check(seq("t"), Expr::parse("t"), Region{0, 0, true, true}, 1), InputError);
}

TEST_CASE("pointwise cauchy checks") {
  Region z{-1, 1};
  auto good = pointwise_cauchy_check(seq("t + 1/(n+1)"), Expr::parse("2^k"), z, 8, 1024);
  CHECK(good.status == Status::Holds);
  CHECK(good.per_point.size() == 9);
  auto osc = pointwise_cauchy_check(seq("(-1)^n * t"), Expr::parse("k"), z, 8, 64);
  CHECK(osc.status == Status::Fails);
  REQUIRE(osc.witness);
  CHECK(*osc.witness != 0);
  // t = 0 is the one constant sequence.
  for (std::size_t i = 0; i < osc.points.size(); ++i)
    CHECK((osc.per_point[i].status == Status::Holds) == (osc.points[i] == 0));
  CHECK_THROWS_AS(pointwise_cauchy_check(seq("exp(t) + n"), Expr::parse("k"), z, 2, 8), InputError);
}

TEST_CASE("limit regularity") {
  const auto t0 = std::chrono::steady_clock::now();
  Region z{0, 1};
  auto exp_seq = seq("sum(i, 0, n, t^i / fact(i))", "2^-(k+2)");
  UcSchedule sc;
  sc.grid = 32;
  auto rep = limit_regularity_suite(exp_seq, Expr::parse("exp(t)"), z, 12, sc);
  CHECK(rep.ok());
  REQUIRE(rep.levels.size() == 13);
  for (const auto& lv : rep.levels) {
    CHECK(lv.pairs > 0);
    CHECK(lv.delta == pow2(-static_cast<long>(lv.level) - 3));
  }
  MESSAGE("exp regularity to level 12: " << seconds_since(t0) << " s");

  // Lipschitz-1 maps: the limit modulus is the factor modulus one level up.
  UcSchedule wide;
  wide.max_index = 200;
  wide.grid = 32;
  wide.refine = 2;
  auto pl = limit_regularity_suite(seq("abs(t - 1/2) + 1/(n+1)", "2^-k"), Expr::parse("abs(t - 1/2)"), z, 4, wide);
  CHECK(pl.ok());
  for (const auto& lv : pl.levels) {
    CHECK(lv.delta == pow2(-static_cast<long>(lv.level) - 1));
    CHECK(lv.alpha == (std::size_t{1} << (lv.level + 2)) - 1);
  }

  auto c = limit_regularity_suite(seq("t^2", "2^-(k+2)"), Expr::parse("t^2"), z, 6, sc);
  CHECK(c.ok());
  for (const auto& lv : c.levels) CHECK(lv.alpha == 0);

  CHECK_THROWS_AS(limit_regularity_suite(seq("t^n"), Expr::parse("0"), z, 1), PreconditionUnmet);
  CHECK_THROWS_AS(limit_regularity_suite(seq("t^n", "2^-k"), Expr::parse("0"), Region{0, 1, false, true}, 1),
                  PreconditionUnmet);
}
