#include "basespace/approach.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace basespace {

const char* to_string(Status s) {
  switch (s) {
    case Status::Holds: return "holds";
    case Status::Fails: return "fails";
    case Status::PreconditionUnmet: return "precondition-unmet";
    case Status::Unknown: return "unknown";
  }
  return "?";
}

const char* to_string(Method m) { return m == Method::KernelReduction ? "kernel-reduction" : "brute-force-oracle"; }

namespace {

constexpr std::size_t kEnumerationCap = 16;

void check_enumerable(const FinSpace& space) {
  if (space.point_count() > kEnumerationCap)
    throw InputError("enumeration is limited to " + std::to_string(kEnumerationCap) + " points");
}

// Tail of u from index `from`, read off by unrolling one full period.
PointSet unrolled_tail(const LassoNet& u, std::size_t from) {
  PointSet s;
  for (std::size_t n = from; n < from + u.prefix.size() + u.cycle.size(); ++n) s.insert(u.at(n));
  return s;
}

// O contains a tail of u.
bool contains_tail(PointSet o, const LassoNet& u) {
  for (std::size_t start = 0; start <= u.prefix.size(); ++start)
    if (unrolled_tail(u, start).subset_of(o)) return true;
  return false;
}

Verdict fails_with(Witness w, Method m = Method::KernelReduction) {
  Verdict v;
  v.status = Status::Fails;
  v.method = m;
  v.witness = std::move(w);
  return v;
}

LassoNet net_of(PointSet s) { return LassoNet{{}, s.points()}; }

// Kernel of x restricted to the trace on a.
bool cauchy_mask(const GradedBase& base, PointSet r, PointSet within) {
  bool ok = true;
  r.for_each([&](Point y) { ok = ok && r.subset_of(base.kernel(y) & within); });
  return ok;
}

bool converges_mask(const GradedBase& base, PointSet r, PointSet within) {
  bool ok = false;
  within.for_each([&](Point x) { ok = ok || r.subset_of(base.kernel(x) & within); });
  return ok;
}

}  // namespace

Verdict approaches(const LassoNet& u, const LassoNet& v, const GradedBase& base) {
  const std::size_t n = base.space().point_count();
  check_net(u, n);
  check_net(v, n);
  const PointSet ru = recurrent_set(u), rv = recurrent_set(v);
  for (const auto& m : base.all_members()) {
    if (!m.set.intersects(rv) || ru.subset_of(m.set)) continue;
    return fails_with({base.levels()[m.level].label, (m.set & rv).first(), m.open_index, ru.minus(m.set).first()});
  }
  return Verdict{};
}

Verdict approaches_oracle(const LassoNet& u, const LassoNet& v, const GradedBase& base) {
  const std::size_t n = base.space().point_count();
  check_net(u, n);
  check_net(v, n);
  const std::size_t window = v.cycle.size(), first = v.prefix.size();
  for (std::size_t l = 0; l < base.levels().size(); ++l) {
    const auto members = base.members(l);
    const auto& indices = base.levels()[l].members;
    std::vector<std::vector<std::size_t>> options(window);
    for (std::size_t j = 0; j < window; ++j)
      for (std::size_t k = 0; k < members.size(); ++k)
        if (members[k].contains(v.at(first + j))) options[j].push_back(k);
    // Odometer over every selection on the window.
    std::vector<std::size_t> pick(window, 0);
    while (true) {
      for (std::size_t j = 0; j < window; ++j) {
        const PointSet o = members[options[j][pick[j]]];
        if (!contains_tail(o, u)) {
          Point excluded = unrolled_tail(u, u.prefix.size()).minus(o).first();
          Verdict out = fails_with({base.levels()[l].label, v.at(first + j), indices[options[j][pick[j]]], excluded},
                                   Method::BruteForceOracle);
          return out;
        }
      }
      std::size_t j = 0;
      while (j < window && ++pick[j] == options[j].size()) pick[j++] = 0;
      if (j == window) break;
    }
  }
  Verdict out;
  out.method = Method::BruteForceOracle;
  return out;
}

bool replay_witness(const LassoNet& u, const LassoNet& v, const GradedBase& base, const Witness& w) {
  const auto& levels = base.levels();
  auto level = std::find_if(levels.begin(), levels.end(), [&](const BaseLevel& l) { return l.label == w.level; });
  if (level == levels.end()) return false;
  if (std::find(level->members.begin(), level->members.end(), w.member) == level->members.end()) return false;
  const PointSet o = base.space().opens().at(w.member);
  if (!o.contains(w.recurrent) || o.contains(w.excluded)) return false;
  // The selection puts O at every index of v valued w.recurrent; those
  // indices recur in every tail of v.
  const std::size_t first = v.prefix.size();
  bool recurs = false;
  for (std::size_t j = first; j < first + v.cycle.size(); ++j) recurs = recurs || v.at(j) == w.recurrent;
  if (!recurs) return false;
  // And every tail of u visits the excluded point, so O contains no tail.
  for (std::size_t start = 0; start <= u.prefix.size(); ++start)
    if (!unrolled_tail(u, start).contains(w.excluded)) return false;
  return !contains_tail(o, u);
}

Verdict converges(const LassoNet& u, Point x, const GradedBase& base) { return approaches(u, constant_net(x), base); }

PointSet limits(const LassoNet& u, const GradedBase& base) {
  PointSet out;
  for (Point x = 0; x < base.space().point_count(); ++x)
    if (converges(u, x, base).holds()) out.insert(x);
  return out;
}

Verdict is_cauchy(const LassoNet& u, const GradedBase& base) { return approaches(u, u, base); }

bool converges_by_neighbourhoods(const LassoNet& u, Point x, const GradedBase& base) {
  for (const auto& m : base.all_members())
    if (m.set.contains(x) && !contains_tail(m.set, u)) return false;
  return true;
}

Classification classify_base(const GradedBase& base) {
  const FinSpace& space = base.space();
  Classification c;
  for (Point x = 0; x < space.point_count(); ++x) {
    for (Point y = 0; y < space.point_count(); ++y) {
      if (!base.kernel(x).contains(y) || base.kernel(y).contains(x)) continue;
      // The constant net at y converges to x, yet x does not approach it.
      Verdict v = approaches(constant_net(x), constant_net(y), base);
      v.nets = {constant_net(y), constant_net(x)};
      v.detail = "constant net at " + space.label(y) + " converges to " + space.label(x) + ", but constant " +
                 space.label(x) + " does not approach it";
      c.lsb = c.csb = c.sb = v;
      return c;
    }
  }
  if ((c.sb.holds() && !c.csb.holds()) || (c.csb.holds() && !c.lsb.holds()))
    throw std::logic_error("sb/csb/lsb containment violated");
  return c;
}

Verdict is_uniform(const SpaceMap& f, const GradedBase& src, const GradedBase& tgt) {
  check_map(f);
  for (Point x = 0; x < src.space().point_count(); ++x) {
    const PointSet bad = f.image(src.kernel(x)).minus(tgt.kernel(f(x)));
    if (bad.empty()) continue;
    Point y = 0;
    while (!(src.kernel(x).contains(y) && bad.contains(f(y)))) ++y;
    Verdict v = approaches(constant_net(f(y)), constant_net(f(x)), tgt);
    v.nets = {constant_net(y), constant_net(x)};
    v.detail = "constant " + src.space().label(y) + " approaches constant " + src.space().label(x) +
               " but their images do not";
    return v;
  }
  return Verdict{};
}

Verdict is_complete(const GradedBase& base) {
  check_enumerable(base.space());
  const PointSet all = base.space().full();
  for (std::uint64_t bits = 1; bits <= all.bits(); ++bits) {
    PointSet r(bits);
    if (cauchy_mask(base, r, all) && !converges_mask(base, r, all)) {
      Verdict v;
      v.status = Status::Fails;
      v.nets = {net_of(r)};
      v.detail = "cauchy net with recurrent set " + format_set(base.space(), r) + " has no limit";
      return v;
    }
  }
  return Verdict{};
}

Verdict is_precompact(const GradedBase& base) {
  check_enumerable(base.space());
  const PointSet all = base.space().full();
  for (std::uint64_t bits = 1; bits <= all.bits(); ++bits) {
    // Subnets of a lasso net realize exactly the nonempty subsets of its
    // recurrent set.
    bool found = false;
    for (std::uint64_t sub = bits; sub != 0 && !found; sub = (sub - 1) & bits)
      found = cauchy_mask(base, PointSet(sub), all);
    if (!found) {
      Verdict v;
      v.status = Status::Fails;
      v.nets = {net_of(PointSet(bits))};
      v.detail = "no cauchy subnet";
      return v;
    }
  }
  return Verdict{};
}

Verdict is_compact(const FinSpace& space) {
  check_enumerable(space);
  const PointSet all = space.full();
  for (std::uint64_t bits = 1; bits <= all.bits(); ++bits) {
    bool found = false;
    for (std::uint64_t sub = bits; sub != 0 && !found; sub = (sub - 1) & bits)
      for (Point x = 0; x < space.point_count() && !found; ++x) found = PointSet(sub).subset_of(space.minimal_open(x));
    if (!found) {
      Verdict v;
      v.status = Status::Fails;
      v.nets = {net_of(PointSet(bits))};
      v.detail = "no convergent subnet";
      return v;
    }
  }
  return Verdict{};
}

bool is_complete_subset(const GradedBase& base, PointSet a) {
  check_enumerable(base.space());
  for (std::uint64_t sub = a.bits(); sub != 0; sub = (sub - 1) & a.bits())
    if (cauchy_mask(base, PointSet(sub), a) && !converges_mask(base, PointSet(sub), a)) return false;
  return true;
}

Verdict check_baire(const GradedBase& base) {
  const FinSpace& space = base.space();
  check_enumerable(space);
  auto unmet = [](std::string why) {
    Verdict v;
    v.status = Status::PreconditionUnmet;
    v.detail = std::move(why);
    return v;
  };
  if (!is_hausdorff(space)) return unmet("not Hausdorff");
  if (!is_regular(space)) return unmet("not regular");
  if (!classify_base(base).lsb.holds()) return unmet("not lsb");
  const PointSet all = space.full();
  for (Point x = 0; x < space.point_count(); ++x) {
    bool local = false;
    for (const auto& m : base.all_members()) {
      if (!m.set.contains(x)) continue;
      const std::uint64_t rest = all.minus(m.set).bits();
      for (std::uint64_t extra = rest;; extra = (extra - 1) & rest) {
        if (is_complete_subset(base, m.set | PointSet(extra))) {
          local = true;
          break;
        }
        if (extra == 0) break;
      }
      if (local) break;
    }
    if (!local) return unmet("not locally complete at " + space.label(x));
  }
  PointSet covered;
  for (std::uint64_t bits = 0; bits <= all.bits(); ++bits)
    if (is_nowhere_dense(space, PointSet(bits))) covered |= PointSet(bits);
  if (covered == all) {
    Verdict v;
    v.status = Status::Fails;
    v.detail = "nowhere dense sets cover the space";
    return v;
  }
  Verdict v;
  v.detail = "union of all nowhere dense sets is " + format_set(space, covered);
  return v;
}

bool kernel_approach(const LassoNet& u, const LassoNet& v, const GradedBase& base) {
  return approaches(u, v, base).holds();
}

std::vector<LassoNet> enumerate_nets(std::size_t n, std::size_t max_prefix, std::size_t max_cycle) {
  std::set<std::pair<std::vector<Point>, std::vector<Point>>> seen;
  std::vector<LassoNet> out;
  auto words = [n](std::size_t len) {
    std::vector<std::vector<Point>> ws{{}};
    for (std::size_t i = 0; i < len; ++i) {
      std::vector<std::vector<Point>> next;
      for (const auto& w : ws)
        for (Point p = 0; p < n; ++p) {
          next.push_back(w);
          next.back().push_back(p);
        }
      ws = std::move(next);
    }
    return ws;
  };
  for (std::size_t cl = 1; cl <= max_cycle; ++cl)
    for (std::size_t pl = 0; pl <= max_prefix; ++pl)
      for (const auto& p : words(pl))
        for (const auto& c : words(cl)) {
          LassoNet u = normalize(LassoNet{p, c});
          if (seen.emplace(u.prefix, u.cycle).second) out.push_back(std::move(u));
        }
  return out;
}

std::vector<SubnetSpec> enumerate_subnets(const SuiteBounds& b) {
  std::vector<std::vector<std::size_t>> prefixes{{}};
  for (std::size_t d = 1; d <= b.subnet_max_increment; ++d) prefixes.push_back({d});
  std::vector<std::vector<std::size_t>> cycles;
  std::vector<std::vector<std::size_t>> layer{{}};
  for (std::size_t len = 1; len <= b.subnet_max_cycle; ++len) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& w : layer)
      for (std::size_t d = 1; d <= b.subnet_max_increment; ++d) {
        next.push_back(w);
        next.back().push_back(d);
      }
    layer = next;
    cycles.insert(cycles.end(), layer.begin(), layer.end());
  }
  std::vector<SubnetSpec> out;
  for (std::size_t s = 0; s <= b.subnet_max_start; ++s)
    for (const auto& p : prefixes)
      for (const auto& c : cycles) out.push_back(SubnetSpec{s, {p, c}});
  return out;
}

bool SuiteReport::ok() const {
  return !partial && std::all_of(axioms.begin(), axioms.end(), [](const AxiomResult& a) { return a.counterexamples == 0; });
}

const AxiomResult& SuiteReport::get(std::string_view name) const {
  for (const auto& a : axioms)
    if (a.name == name) return a;
  throw std::out_of_range("no axiom named " + std::string(name));
}

namespace {

struct BudgetExhausted {};

constexpr std::size_t kExamplesKept = 5;

void record(AxiomResult& r, bool ok, const std::function<std::string()>& describe) {
  ++r.cases;
  if (ok) return;
  ++r.counterexamples;
  if (r.examples.size() < kExamplesKept) r.examples.push_back(describe());
}

std::string format_binet(const FinSpace& space, const LassoBiNet& b) {
  std::string s = "rows " + std::to_string(b.row_prefix) + "+" + std::to_string(b.row_cycle()) + " cols " +
                  std::to_string(b.col_prefix) + "+" + std::to_string(b.col_cycle()) + " [";
  for (std::size_t i = 0; i < b.rows(); ++i) {
    s += i ? ";" : "";
    for (std::size_t j = 0; j < b.cols(); ++j) s += (j ? "," : "") + space.label(b.table[i][j]);
  }
  return s + "]";
}

// What axiom 4 needs to know about a bi-net: its recurrent set and the
// column limit sets of the recurrent column classes.
struct MarginalKey {
  std::uint64_t recurrent;
  std::vector<std::uint64_t> limit_sets;  // sorted, distinct
  auto operator<=>(const MarginalKey&) const = default;
};

// Net over the column index whose value on each column class lies in that
// class's limit set and whose recurrent set is exactly `target`.
LassoNet marginal_net(const LassoBiNet& b, const std::vector<PointSet>& col_limits, PointSet target) {
  LassoNet out;
  for (std::size_t j = 0; j < b.col_prefix; ++j) out.prefix.push_back(col_limits[j].first());
  std::vector<std::vector<Point>> choice;
  std::size_t passes = 1;
  for (std::size_t j = b.col_prefix; j < b.cols(); ++j) {
    choice.push_back((col_limits[j] & target).points());
    passes = std::max(passes, choice.back().size());
  }
  // Classes sharing a limit set may split the target between them; with
  // `passes` rounds each class visits all of its admissible target points.
  for (std::size_t t = 0; t < passes; ++t)
    for (const auto& c : choice) out.cycle.push_back(c[t % c.size()]);
  return out;
}

// Nonempty S inside the union of the limit sets meeting each of them.
std::vector<PointSet> admissible_marginals(const std::vector<std::uint64_t>& limit_sets) {
  std::uint64_t uni = 0;
  for (auto l : limit_sets) uni |= l;
  std::vector<PointSet> out;
  for (std::uint64_t s = uni; s != 0; s = (s - 1) & uni)
    if (std::all_of(limit_sets.begin(), limit_sets.end(), [s](std::uint64_t l) { return (l & s) != 0; }))
      out.emplace_back(s);
  std::sort(out.begin(), out.end(), CanonicalLess{});
  return out;
}

}  // namespace

SuiteReport run_axiom_suite(const GradedBase& base, const SuiteBounds& bounds, const ApproachFn& approach) {
  const FinSpace& space = base.space();
  check_enumerable(space);
  const std::size_t n = space.point_count();
  SuiteReport report;
  std::uint64_t calls = 0;
  auto ap = [&](const LassoNet& u, const LassoNet& v) {
    if (bounds.budget != 0 && calls >= bounds.budget) throw BudgetExhausted{};
    ++calls;
    return approach(u, v, base);
  };
  auto named = [](const char* name) {
    AxiomResult r;
    r.name = name;
    return r;
  };
  AxiomResult a1 = named("constant-restriction"), a2 = named("heredity"), a3 = named("transitivity"),
              a4 = named("marginal-convergence"), te = named("tail-exclusion"), fm = named("filter-monotonicity");
  auto fmt = [&](const LassoNet& u) { return format_net(space, u); };

  const auto nets = enumerate_nets(n, bounds.max_prefix, bounds.max_cycle);
  report.nets = nets.size();
  const std::size_t count = nets.size();
  try {
    std::vector<std::vector<char>> rel(count, std::vector<char>(count));
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < count; ++j) rel[i][j] = ap(nets[i], nets[j]);

    for (const auto& u : nets)
      for (Point x = 0; x < n; ++x) {
        const bool lhs = ap(u, constant_net(x));
        const bool rhs = converges_by_neighbourhoods(u, x, base);
        record(a1, lhs == rhs, [&] {
          return fmt(u) + " vs constant " + space.label(x) + ": approach " + (lhs ? "holds" : "fails") +
                 ", convergence " + (rhs ? "holds" : "fails");
        });
      }

    const auto subnets = enumerate_subnets(bounds);
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<LassoNet> composed;
      for (const auto& phi : subnets) composed.push_back(compose_subnet(nets[i], phi));
      for (std::size_t j = 0; j < count; ++j) {
        if (!rel[i][j]) continue;
        for (std::size_t k = 0; k < subnets.size(); ++k)
          record(a2, ap(composed[k], nets[j]), [&] {
            return fmt(nets[i]) + " approaches " + fmt(nets[j]) + " but its subnet (start " +
                   std::to_string(subnets[k].start) + ") " + fmt(composed[k]) + " does not";
          });
      }
    }

    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < count; ++j) {
        if (!rel[i][j]) continue;
        for (std::size_t k = 0; k < count; ++k) {
          if (!rel[j][k]) continue;
          record(a3, rel[i][k], [&] {
            return fmt(nets[i]) + " -> " + fmt(nets[j]) + " -> " + fmt(nets[k]) + " but not " + fmt(nets[i]) +
                   " -> " + fmt(nets[k]);
          });
        }
      }

    for (std::size_t i = 0; i < count; ++i) {
      const bool cauchy = rel[i][i];
      if (!cauchy) continue;
      for (Point x = 0; x < n; ++x) {
        const bool lhs = !ap(nets[i], constant_net(x));
        bool rhs = false;
        const PointSet tail = unrolled_tail(nets[i], nets[i].prefix.size());
        for (const auto& m : base.all_members()) rhs = rhs || (m.set.contains(x) && !m.set.intersects(tail));
        record(te, lhs == rhs, [&] { return fmt(nets[i]) + " at " + space.label(x); });
      }
    }

    auto space_ref = base.space_ref();
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < count; ++j) {
        if (!rel[i][j]) continue;
        const auto fu = derived_filter(nets[i], space_ref), fv = derived_filter(nets[j], space_ref);
        record(fm, fu.refines(fv), [&] { return fmt(nets[i]) + " approaches " + fmt(nets[j]); });
      }

    // Axiom 4. Bi-nets are grouped by what the axiom can observe; the
    // hypothesis on the bi-nets themselves depends only on recurrent sets.
    std::unordered_map<std::uint64_t, PointSet> column_limits;
    auto limits_of = [&](const LassoNet& col, std::uint64_t key) {
      auto it = column_limits.find(key);
      if (it != column_limits.end()) return it->second;
      PointSet l;
      for (Point x = 0; x < n; ++x)
        if (ap(col, constant_net(x))) l.insert(x);
      column_limits.emplace(key, l);
      return l;
    };
    std::map<MarginalKey, std::pair<LassoBiNet, std::vector<PointSet>>> groups;
    for (std::size_t r = 1; r <= bounds.binet_rows; ++r)
      for (std::size_t c = 1; c <= bounds.binet_cols; ++c) {
        std::uint64_t tables = 1;
        for (std::size_t k = 0; k < r * c; ++k) tables *= n;
        for (std::size_t rp = 0; rp < r; ++rp)
          for (std::size_t cp = 0; cp < c; ++cp)
            for (std::uint64_t code = 0; code < tables; ++code) {
              LassoBiNet b{rp, cp, std::vector<std::vector<Point>>(r, std::vector<Point>(c))};
              std::uint64_t rest = code;
              for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < c; ++j) {
                  b.table[i][j] = rest % n;
                  rest /= n;
                }
              std::vector<PointSet> col_limits(c);
              bool feasible = true;
              for (std::size_t j = 0; j < c && feasible; ++j) {
                std::uint64_t key = (rp * 4 + r) * 64;
                for (std::size_t i = 0; i < r; ++i) key = key * 64 + b.table[i][j];
                col_limits[j] = limits_of(b.column(j), key);
                feasible = !col_limits[j].empty();
              }
              if (!feasible) continue;
              MarginalKey mk{recurrent_set(b).bits(), {}};
              for (std::size_t j = cp; j < c; ++j) mk.limit_sets.push_back(col_limits[j].bits());
              std::sort(mk.limit_sets.begin(), mk.limit_sets.end());
              mk.limit_sets.erase(std::unique(mk.limit_sets.begin(), mk.limit_sets.end()), mk.limit_sets.end());
              groups.try_emplace(mk, std::move(b), std::move(col_limits));
            }
      }
    std::map<MarginalKey, std::vector<std::pair<PointSet, LassoNet>>> marginals;
    for (const auto& [key, rep] : groups)
      for (PointSet s : admissible_marginals(key.limit_sets))
        marginals[key].emplace_back(s, marginal_net(rep.first, rep.second, s));
    for (const auto& [ku, ru] : groups)
      for (const auto& [kv, rv] : groups) {
        const PointSet uu(ku.recurrent), vv(kv.recurrent);
        bool hyp = true;
        vv.for_each([&](Point y) { hyp = hyp && uu.subset_of(base.kernel(y)); });
        if (!hyp) continue;
        for (const auto& [su, up] : marginals[ku])
          for (const auto& [sv, vp] : marginals[kv])
            record(a4, ap(up, vp), [&] {
              return "U " + format_binet(space, ru.first) + ", V " + format_binet(space, rv.first) + ", u' " +
                     fmt(up) + ", v' " + fmt(vp);
            });
      }
  } catch (const BudgetExhausted&) {
    report.partial = true;
  }
  report.axioms = {a1, a2, a3, a4, te, fm};
  return report;
}

Verdict cauchy_filter_check(const FinFilter& f, const GradedBase& base, std::size_t samples, std::uint64_t seed) {
  for (const auto& w : filter_derived_net_samples(f, samples, seed)) {
    Verdict v = is_cauchy(w, base);
    if (!v.holds()) {
      v.nets = {w};
      v.detail = "derived net is not cauchy";
      return v;
    }
  }
  Verdict v;
  v.detail = "every sampled derived net is eventually constant on the core";
  return v;
}

CauchyStructure cauchy_structure(const GradedBase& base, std::size_t samples, std::uint64_t seed) {
  const FinSpace& space = base.space();
  if (space.point_count() > 12) throw InputError("cauchy structure enumeration is limited to 12 points");
  const auto cls = classify_base(base);
  if (!cls.csb.holds()) throw PreconditionUnmet("not-csb: " + cls.csb.detail);
  CauchyStructure out;
  std::vector<PointSet> cores;
  for (std::uint64_t bits = 1; bits <= space.full().bits(); ++bits) cores.emplace_back(bits);
  std::sort(cores.begin(), cores.end(), CanonicalLess{});
  for (PointSet core : cores) {
    FinFilter f{base.space_ref(), core, space.is_open(core)};
    out.cauchy.push_back(cauchy_filter_check(f, base, samples, seed).holds());
    out.filters.push_back(f);
  }
  auto cauchy_core = [&](PointSet core) {
    auto it = std::lower_bound(cores.begin(), cores.end(), core, CanonicalLess{});
    return static_cast<bool>(out.cauchy[static_cast<std::size_t>(it - cores.begin())]);
  };
  for (Point x = 0; x < space.point_count(); ++x)
    if (!cauchy_core(PointSet::singleton(x))) out.violations.push_back("point filter at " + space.label(x));
  for (std::size_t i = 0; i < cores.size(); ++i) {
    if (!out.cauchy[i]) continue;
    for (std::size_t j = 0; j < cores.size(); ++j) {
      if (cores[j].subset_of(cores[i]) && !out.cauchy[j])
        out.violations.push_back("finer filter " + format_set(space, cores[j]) + " of " + format_set(space, cores[i]));
      if (out.cauchy[j] && cores[i].intersects(cores[j]) && !cauchy_core(cores[i] | cores[j]))
        out.violations.push_back("meet of " + format_set(space, cores[i]) + " and " + format_set(space, cores[j]));
    }
  }
  return out;
}

std::string format_witness(const GradedBase& base, const Witness& w) {
  const FinSpace& s = base.space();
  return "(" + w.level + ", " + s.label(w.recurrent) + ", " + format_set(s, s.opens().at(w.member)) + ", " +
         s.label(w.excluded) + ")";
}

}  // namespace basespace
