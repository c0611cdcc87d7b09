#include "basespace/funcspace.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace basespace {

namespace {

constexpr std::size_t kProductCap = 16;

using Box = std::vector<PointSet>;  // one factor subset per coordinate

std::string join_labels(const std::vector<std::string>& parts) {
  std::string s = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
  return s + ")";
}

std::vector<std::string> tuple_labels(const std::vector<const FinSpace*>& factors, const TupleCoding& c) {
  std::vector<std::string> labels;
  for (Point p = 0; p < c.count(); ++p) {
    if (factors.size() == 1) {
      labels.push_back(factors[0]->label(p));
      continue;
    }
    std::vector<std::string> parts;
    auto coords = c.decode(p);
    for (std::size_t y = 0; y < factors.size(); ++y) parts.push_back(factors[y]->label(coords[y]));
    labels.push_back(join_labels(parts));
  }
  return labels;
}

TupleCoding coding_of(const std::vector<const FinSpace*>& factors, std::size_t cap) {
  TupleCoding c;
  std::size_t total = 1;
  for (const FinSpace* f : factors) {
    c.sizes.push_back(f->point_count());
    total *= f->point_count();
    if (total > cap) throw InputError("product has more than " + std::to_string(cap) + " points");
  }
  return c;
}

PointSet box_set(const Box& b, const TupleCoding& c) {
  PointSet s;
  for (Point p = 0; p < c.count(); ++p) {
    bool in = true;
    for (std::size_t y = 0; y < b.size() && in; ++y) in = b[y].contains(c.coordinate(p, y));
    if (in) s.insert(p);
  }
  return s;
}

// Nonempty finite intersections of the given boxes.
std::vector<Box> intersection_closure(std::vector<Box> boxes) {
  auto empty = [](const Box& b) { return std::any_of(b.begin(), b.end(), [](PointSet s) { return s.empty(); }); };
  auto key = [](const Box& b) {
    std::vector<std::uint64_t> k;
    for (PointSet s : b) k.push_back(s.bits());
    return k;
  };
  std::set<std::vector<std::uint64_t>> seen;
  std::vector<Box> out;
  for (auto& b : boxes)
    if (!empty(b) && seen.insert(key(b)).second) out.push_back(std::move(b));
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      Box m(out[i].size());
      for (std::size_t y = 0; y < m.size(); ++y) m[y] = out[i][y] & out[j][y];
      if (!empty(m) && seen.insert(key(m)).second) out.push_back(std::move(m));
    }
  return out;
}

std::vector<const FinSpace*> factor_spaces(const ProductSpec& spec) {
  std::vector<const FinSpace*> out;
  for (const auto& f : spec.factors) out.push_back(&f.space());
  return out;
}

// Graded base from per-level boxes, on the space their sets generate.
ProductBase assemble(const ProductSpec& spec, const std::vector<std::string>& level_labels,
                     const std::vector<std::vector<Box>>& level_boxes) {
  auto factors = factor_spaces(spec);
  ProductBase pb;
  pb.coding = coding_of(factors, kProductCap);
  std::vector<std::vector<PointSet>> level_sets;
  std::vector<PointSet> all;
  for (const auto& boxes : level_boxes) {
    std::vector<PointSet> sets;
    for (const auto& b : intersection_closure(boxes)) sets.push_back(box_set(b, pb.coding));
    std::sort(sets.begin(), sets.end(), CanonicalLess{});
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    all.insert(all.end(), sets.begin(), sets.end());
    level_sets.push_back(std::move(sets));
  }
  auto space = std::make_shared<const FinSpace>(FinSpace::from_subbase(tuple_labels(factors, pb.coding), all));
  std::vector<BaseLevel> levels;
  for (std::size_t l = 0; l < level_sets.size(); ++l) {
    BaseLevel lv{level_labels[l], {}};
    for (PointSet s : level_sets[l]) lv.members.push_back(*space->open_index(s));
    levels.push_back(std::move(lv));
  }
  pb.base = GradedBase(space, std::move(levels));
  return pb;
}

// Calls f on every tuple of level indices, coordinate 0 slowest.
template <typename F>
void for_each_level_tuple(const ProductSpec& spec, F&& f) {
  std::vector<std::size_t> idx(spec.factors.size(), 0);
  for (;;) {
    f(idx);
    std::size_t y = idx.size();
    while (y-- > 0) {
      if (++idx[y] < spec.factors[y].levels().size()) break;
      idx[y] = 0;
    }
    if (y == static_cast<std::size_t>(-1)) return;
  }
}

std::string level_tuple_label(const ProductSpec& spec, const std::vector<std::size_t>& idx) {
  if (idx.size() == 1) return spec.factors[0].levels()[idx[0]].label;
  std::vector<std::string> parts;
  for (std::size_t y = 0; y < idx.size(); ++y) parts.push_back(spec.factors[y].levels()[idx[y]].label);
  return join_labels(parts);
}

Box full_box(const ProductSpec& spec) {
  Box b;
  for (const auto& f : spec.factors) b.push_back(f.space().full());
  return b;
}

// Boxes constraining the coordinates in z to one choice each from `options`.
void choose_boxes(const Box& base, PointSet z, const std::vector<std::vector<PointSet>>& options,
                  std::vector<Box>& out) {
  auto coords = z.points();
  std::vector<std::size_t> pick(coords.size(), 0);
  for (Point y : coords)
    if (options[y].empty()) return;
  for (;;) {
    Box b = base;
    for (std::size_t i = 0; i < coords.size(); ++i) b[coords[i]] = options[coords[i]][pick[i]];
    out.push_back(std::move(b));
    std::size_t i = 0;
    while (i < coords.size() && ++pick[i] == options[coords[i]].size()) pick[i++] = 0;
    if (i == coords.size()) return;
  }
}

bool all_cauchy_coordinates(const std::vector<LassoNet>& coords, const ProductSpec& spec) {
  for (std::size_t y = 0; y < coords.size(); ++y)
    if (!is_cauchy(coords[y], spec.factors[y]).holds()) return false;
  return true;
}

}  // namespace

std::size_t TupleCoding::count() const {
  std::size_t n = 1;
  for (std::size_t s : sizes) n *= s;
  return n;
}

Point TupleCoding::encode(const std::vector<Point>& coords) const {
  if (coords.size() != sizes.size()) throw InputError("tuple has the wrong number of coordinates");
  Point p = 0;
  for (std::size_t y = 0; y < sizes.size(); ++y) {
    if (coords[y] >= sizes[y]) throw InputError("tuple coordinate out of range");
    p = p * sizes[y] + coords[y];
  }
  return p;
}

std::vector<Point> TupleCoding::decode(Point p) const {
  std::vector<Point> out(sizes.size());
  for (std::size_t y = sizes.size(); y-- > 0;) {
    out[y] = p % sizes[y];
    p /= sizes[y];
  }
  return out;
}

Point TupleCoding::coordinate(Point p, std::size_t y) const {
  for (std::size_t i = sizes.size(); --i > y;) p /= sizes[i];
  return p % sizes[y];
}

ProductSpec ProductSpec::power(const GradedBase& base, std::vector<std::string> index_labels) {
  ProductSpec s;
  s.factors.assign(index_labels.size(), base);
  s.index_labels = std::move(index_labels);
  return s;
}

void check_product_spec(const ProductSpec& spec) {
  if (spec.factors.empty()) throw InputError("product needs a nonempty index set");
  if (spec.index_labels.size() != spec.factors.size())
    throw InputError("product has " + std::to_string(spec.index_labels.size()) + " index labels for " +
                     std::to_string(spec.factors.size()) + " factors");
  for (std::size_t y = 0; y < spec.factors.size(); ++y) {
    auto r = validate(spec.factors[y]);
    if (!r.ok())
      throw InputError("factor " + spec.index_labels[y] + " is not a base space: " + r.issues.front().detail);
  }
}

FinSpace product_space(const std::vector<const FinSpace*>& factors, TupleCoding* coding) {
  if (factors.empty()) throw InputError("product needs at least one factor");
  TupleCoding c = coding_of(factors, PointSet::kMaxPoints);
  std::vector<PointSet> subbase;
  for (std::size_t y = 0; y < factors.size(); ++y)
    for (PointSet o : factors[y]->opens()) {
      Box b;
      for (const FinSpace* f : factors) b.push_back(f->full());
      b[y] = o;
      subbase.push_back(box_set(b, c));
    }
  if (coding) *coding = c;
  return FinSpace::from_subbase(tuple_labels(factors, c), subbase);
}

const char* to_string(ZFamily::Kind k) {
  switch (k) {
    case ZFamily::Kind::Singletons: return "singletons";
    case ZFamily::Kind::Whole: return "whole";
    case ZFamily::Kind::Compacts: return "compacts";
    case ZFamily::Kind::Completes: return "completes";
    case ZFamily::Kind::Explicit: return "explicit";
  }
  return "?";
}

std::vector<PointSet> resolve(const ZFamily& z, std::size_t n) {
  const PointSet all = PointSet::full(n);
  std::vector<PointSet> out;
  switch (z.kind) {
    case ZFamily::Kind::Singletons:
      for (Point y = 0; y < n; ++y) out.push_back(PointSet::singleton(y));
      break;
    case ZFamily::Kind::Whole:
      out.push_back(all);
      break;
    case ZFamily::Kind::Compacts:
      for (std::uint64_t b = 1; b <= all.bits(); ++b) out.emplace_back(b);
      break;
    case ZFamily::Kind::Explicit:
      for (PointSet s : z.members) {
        if (!s.subset_of(all)) throw InputError("Z member is not a subset of the index set");
        out.push_back(s);
      }
      break;
    case ZFamily::Kind::Completes: {
      if (!z.domain) throw InputError("completes family needs a base space on the index set");
      const GradedBase& d = *z.domain;
      if (d.space().point_count() != n) throw InputError("completes domain does not match the index set");
      auto cls = classify_base(d);
      if (!cls.lsb.holds()) throw PreconditionUnmet("completes family needs an lsb domain: " + cls.lsb.detail);
      for (std::uint64_t b = 1; b <= all.bits(); ++b) {
        PointSet s(b);
        if (closure(d.space(), s) == s && is_complete_subset(d, s)) out.push_back(s);
      }
      break;
    }
  }
  std::sort(out.begin(), out.end(), CanonicalLess{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ProductBase uc_subbase(const ProductSpec& spec, const ZFamily& z) {
  check_product_spec(spec);
  const auto family = resolve(z, spec.factors.size());
  std::vector<std::string> labels;
  std::vector<std::vector<Box>> boxes;
  const Box full = full_box(spec);
  for_each_level_tuple(spec, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::vector<PointSet>> options;
    for (std::size_t y = 0; y < idx.size(); ++y) options.push_back(spec.factors[y].members(idx[y]));
    std::vector<Box> level;
    for (PointSet zs : family) choose_boxes(full, zs, options, level);
    labels.push_back(level_tuple_label(spec, idx));
    boxes.push_back(std::move(level));
  });
  return assemble(spec, labels, boxes);
}

ProductBase product_base(const ProductSpec& spec) { return uc_subbase(spec, ZFamily::singletons()); }

ProductBase compact_open_subbase(const ProductSpec& spec, const ZFamily& z) {
  check_product_spec(spec);
  for (const auto& f : spec.factors)
    if (!(f.space() == spec.factors[0].space()))
      throw InputError("the Z-open topology needs the same space at every index");
  const auto family = resolve(z, spec.factors.size());
  const Box full = full_box(spec);
  std::vector<Box> level;
  for (PointSet zs : family)
    for (PointSet o : spec.factors[0].space().opens()) {
      if (o.empty()) continue;
      Box b = full;
      zs.for_each([&](Point y) { b[y] = o; });
      level.push_back(std::move(b));
    }
  ProductBase co = assemble(spec, {"co"}, {level});
  ProductBase uc = uc_subbase(spec, z);
  if (!lattice_contained(co.base.space(), uc.base.space()))
    throw std::logic_error("Z-open topology is not contained in the Z-uniform topology");
  return co;
}

bool lattice_contained(const FinSpace& a, const FinSpace& b) {
  if (a.labels() != b.labels()) return false;
  return std::all_of(a.opens().begin(), a.opens().end(), [&](PointSet o) { return b.is_open(o); });
}

LassoNet project(const LassoNet& f, const TupleCoding& coding, std::size_t y) {
  LassoNet out;
  for (Point p : f.prefix) out.prefix.push_back(coding.coordinate(p, y));
  for (Point p : f.cycle) out.cycle.push_back(coding.coordinate(p, y));
  return normalize(out);
}

PointwiseApproachReport pointwise_approach(const LassoNet& f, const LassoNet& g, const ProductSpec& spec,
                                           const ProductBase& pb) {
  const std::size_t n = pb.base.space().point_count();
  if (pb.coding.count() != n || pb.coding.sizes.size() != spec.factors.size())
    throw InputError("product base does not match the product specification");
  check_net(f, n);
  check_net(g, n);
  PointwiseApproachReport r;
  r.product = approaches(f, g, pb.base);
  bool all = true;
  std::optional<std::size_t> failing;
  for (std::size_t y = 0; y < spec.factors.size(); ++y) {
    r.coordinates.push_back(approaches(project(f, pb.coding, y), project(g, pb.coding, y), spec.factors[y]));
    if (!r.coordinates.back().holds()) {
      all = false;
      if (!failing) failing = y;
    }
  }
  r.agrees = r.product.holds() == all;
  r.joint = r.product;
  if (failing) {
    const auto& w = r.coordinates[*failing].witness;
    r.joint.detail = "coordinate " + spec.index_labels[*failing] + " fails" +
                     (w ? ": " + format_witness(spec.factors[*failing], *w) : std::string());
  }
  if (!r.agrees) r.joint.detail += " (product and coordinate verdicts disagree)";
  return r;
}

bool complete_relative(const GradedBase& base, PointSet candidates) {
  const PointSet all = base.space().full();
  for (std::uint64_t bits = 1; bits <= all.bits(); ++bits) {
    const LassoNet u{{}, PointSet(bits).points()};
    if (!is_cauchy(u, base).holds()) continue;
    bool limit = false;
    candidates.for_each([&](Point x) { limit = limit || converges(u, x, base).holds(); });
    if (!limit) return false;
  }
  return true;
}

bool ProductSuiteReport::ok() const {
  return std::all_of(lines.begin(), lines.end(), [](const Line& l) { return l.violations == 0; });
}

const ProductSuiteReport::Line& ProductSuiteReport::get(std::string_view name) const {
  for (const auto& l : lines)
    if (l.name == name) return l;
  throw std::out_of_range("no suite line " + std::string(name));
}

ProductSuiteReport product_theorem_suite(const ProductSuiteBounds& bounds) {
  ProductSuiteReport rep;
  std::map<std::string, ProductSuiteReport::Line> lines;
  const std::vector<std::string> order{"approach-coordinatewise",  "cauchy-coordinatewise",          "completeness-coordinatewise",
                                       "lsb-product", "uc-power-complete",             "uc-cauchy-pointwise",
                                       "zo-in-uc",    "singletons-uc-eq-p",  "uc-eq-p",
                                       "co-eq-uc"};
  for (const auto& n : order) lines[n].name = n;
  auto record = [&](const std::string& name, bool ok, const std::function<std::string()>& what) {
    auto& l = lines[name];
    ++l.cases;
    if (ok) return;
    ++l.violations;
    if (l.examples.size() < 3) l.examples.push_back(what());
  };

  std::vector<SpaceRef> spaces;
  for (std::size_t n = 1; n <= bounds.max_points; ++n)
    for (auto& t : enumerate_topologies(n)) spaces.push_back(std::make_shared<const FinSpace>(std::move(t)));

  for (const auto& a : spaces)
    for (const auto& b : spaces) {
      ProductSpec spec;
      spec.index_labels = {"y0", "y1"};
      spec.factors = {kernel_base(a), open_base(b)};
      ProductBase pb = product_base(spec);
      ++rep.products;
      const FinSpace& ps = pb.base.space();
      const std::size_t n = ps.point_count();
      auto describe = [&](const std::string& extra) {
        std::ostringstream os;
        os << "A opens " << a->opens().size() << ", B opens " << b->opens().size() << ": " << extra;
        return os.str();
      };

      const std::size_t prefix = n <= bounds.small_product ? bounds.small_prefix : bounds.max_prefix;
      const auto nets = enumerate_nets(n, prefix, bounds.max_cycle);
      std::vector<std::vector<LassoNet>> proj(nets.size());
      for (std::size_t i = 0; i < nets.size(); ++i)
        for (std::size_t y = 0; y < 2; ++y) proj[i].push_back(project(nets[i], pb.coding, y));
      for (std::size_t i = 0; i < nets.size(); ++i) {
        const bool pc = is_cauchy(nets[i], pb.base).holds();
        record("cauchy-coordinatewise", pc == all_cauchy_coordinates(proj[i], spec),
               [&] { return describe("net " + format_net(ps, nets[i])); });
        for (std::size_t j = 0; j < nets.size(); ++j) {
          const bool prod = approaches(nets[i], nets[j], pb.base).holds();
          const bool coords = approaches(proj[i][0], proj[j][0], spec.factors[0]).holds() &&
                              approaches(proj[i][1], proj[j][1], spec.factors[1]).holds();
          record("approach-coordinatewise", prod == coords,
                 [&] { return describe(format_net(ps, nets[i]) + " vs " + format_net(ps, nets[j])); });
        }
      }

      // Limits may only be taken from C_A x C_B; deleting one candidate point
      // from a factor can make it incomplete.
      std::vector<std::pair<PointSet, PointSet>> cands{{a->full(), b->full()}};
      for (Point p = 0; p < a->point_count(); ++p) cands.emplace_back(a->full().minus(PointSet::singleton(p)), b->full());
      for (Point p = 0; p < b->point_count(); ++p) cands.emplace_back(a->full(), b->full().minus(PointSet::singleton(p)));
      for (const auto& [ca, cb] : cands) {
        PointSet cp;
        for (Point p = 0; p < n; ++p)
          if (ca.contains(pb.coding.coordinate(p, 0)) && cb.contains(pb.coding.coordinate(p, 1))) cp.insert(p);
        const bool fa = complete_relative(spec.factors[0], ca), fb = complete_relative(spec.factors[1], cb);
        record("completeness-coordinatewise", complete_relative(pb.base, cp) == (fa && fb),
               [&] { return describe("candidates " + format_set(ps, cp)); });
      }

      if (classify_base(spec.factors[0]).lsb.holds() && classify_base(spec.factors[1]).lsb.holds())
        record("lsb-product", classify_base(pb.base).lsb.holds(), [&] { return describe("product not lsb"); });
    }

  // X^Y over a two-point index set.
  for (const auto& x : spaces) {
    if (x->point_count() > 3) continue;
    ProductSpec spec = ProductSpec::power(kernel_base(x), {"y0", "y1"});
    ProductBase p = product_base(spec);
    ProductBase uc = uc_subbase(spec, ZFamily::whole());
    auto name = [&] { return "X opens " + std::to_string(x->opens().size()); };
    record("uc-power-complete", is_complete(uc.base).holds(), name);
    auto imp = uc_cauchy_implies_pointwise(spec, bounds.max_prefix, bounds.max_cycle);
    record("uc-cauchy-pointwise", imp.violations == 0, [&] { return imp.examples.front(); });
    ProductBase single = uc_subbase(spec, ZFamily::singletons());
    record("singletons-uc-eq-p", single.base.space() == p.base.space(), name);
    record("uc-eq-p", uc.base.space() == p.base.space(), name);
    for (const ZFamily& z : {ZFamily::singletons(), ZFamily::whole(), ZFamily::compacts()}) {
      ProductBase co = compact_open_subbase(spec, z);
      ProductBase ucz = uc_subbase(spec, z);
      record("zo-in-uc", lattice_contained(co.base.space(), ucz.base.space()), name);
      if (z.kind == ZFamily::Kind::Compacts) record("co-eq-uc", co.base.space() == uc.base.space(), name);
    }
  }
  for (const auto& n : order) rep.lines.push_back(std::move(lines[n]));
  return rep;
}

ImplicationReport uc_cauchy_implies_pointwise(const ProductSpec& power, std::size_t max_prefix,
                                              std::size_t max_cycle) {
  ProductBase uc = uc_subbase(power, ZFamily::whole());
  ImplicationReport r;
  for (const auto& f : enumerate_nets(uc.base.space().point_count(), max_prefix, max_cycle)) {
    ++r.cases;
    if (!is_cauchy(f, uc.base).holds()) continue;
    ++r.premise;
    for (std::size_t y = 0; y < power.factors.size(); ++y)
      if (!is_cauchy(project(f, uc.coding, y), power.factors[y]).holds()) {
        ++r.violations;
        if (r.examples.size() < 3)
          r.examples.push_back(format_net(uc.base.space(), f) + " is uc-cauchy but coordinate " +
                               power.index_labels[y] + " is not cauchy");
        break;
      }
  }
  return r;
}

ProductUStructure product_u_structure(const std::vector<UStructureFin>& factors) {
  if (factors.empty()) throw InputError("product needs at least one factor");
  std::vector<const FinSpace*> carriers, auxes;
  for (const auto& f : factors) {
    check_ustructure(f);
    carriers.push_back(f.carrier.get());
    auxes.push_back(f.aux.get());
  }
  ProductUStructure out;
  coding_of(carriers, kProductCap);
  auto carrier = std::make_shared<const FinSpace>(product_space(carriers, &out.carrier_coding));
  auto aux = std::make_shared<const FinSpace>(product_space(auxes, &out.aux_coding));
  UStructureFin& s = out.structure;
  s.carrier = carrier;
  s.aux = aux;
  const std::size_t n = carrier->point_count();
  s.table.assign(n, std::vector<Point>(n));
  for (Point p = 0; p < n; ++p)
    for (Point q = 0; q < n; ++q) {
      std::vector<Point> z;
      for (std::size_t y = 0; y < factors.size(); ++y)
        z.push_back(factors[y].u(out.carrier_coding.coordinate(p, y), out.carrier_coding.coordinate(q, y)));
      s.table[p][q] = out.aux_coding.encode(z);
    }
  Box full;
  std::vector<std::vector<PointSet>> options;
  for (const auto& f : factors) {
    full.push_back(f.aux->full());
    options.push_back(f.radii);
  }
  std::vector<Box> cyl;
  for (std::uint64_t fb = 1; fb < (std::uint64_t{1} << factors.size()); ++fb)
    choose_boxes(full, PointSet(fb), options, cyl);
  // Empty coordinates give the empty radius; keep it when a factor has one.
  std::set<PointSet, CanonicalLess> radii;
  for (const auto& b : cyl) radii.insert(box_set(b, out.aux_coding));
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<PointSet> cur(radii.begin(), radii.end());
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) grew = radii.insert(cur[i] & cur[j]).second || grew;
  }
  s.radii.assign(radii.begin(), radii.end());
  check_ustructure(s);

  std::vector<FinSpace> induced;
  for (const auto& f : factors) induced.push_back(induced_topology(f));
  std::vector<const FinSpace*> ptrs;
  for (const auto& t : induced) ptrs.push_back(&t);
  out.topology_matches = induced_topology(s) == product_space(ptrs);
  return out;
}

bool Region::contains(const Rational& t) const {
  if (t < lo || t > hi) return false;
  if (lo_open && t == lo) return false;
  if (hi_open && t == hi) return false;
  return true;
}

std::vector<Rational> Region::grid(std::size_t g) const {
  if (g == 0) throw InputError("grid needs at least one step");
  std::vector<Rational> out;
  for (std::size_t i = 0; i <= g; ++i) {
    Rational t = lo + (hi - lo) * Rational(static_cast<unsigned long>(i), static_cast<unsigned long>(g));
    if (contains(t)) out.push_back(t);
  }
  return out;
}

std::string Region::text() const {
  return std::string(lo_open ? "(" : "[") + format_rational(lo) + ", " + format_rational(hi) + (hi_open ? ")" : "]");
}

Interval FunctionSeq::at(std::size_t n, const Rational& t, unsigned bits) const {
  Env env;
  env.emplace("n", Interval(Rational(static_cast<unsigned long>(n))));
  env.emplace("t", Interval(t));
  return term.eval(env, bits);
}

UcResult uniform_convergence_check(const FunctionSeq& seq, const Expr& limit, const Region& z, std::size_t k,
                                   const UcSchedule& sc) {
  UcResult r;
  r.level = k;
  r.index = sc.max_index;
  const Rational hold = pow2(-static_cast<long>(k) - 1);
  const Rational fail = pow2(1 - static_cast<long>(k));
  const auto pts = z.grid(sc.grid * std::max<std::size_t>(sc.refine, 1));
  if (pts.empty()) throw InputError("region " + z.text() + " has no grid points");
  std::map<Rational, Interval> lim;
  auto dev = [&](std::size_t n, const Rational& t) {
    auto it = lim.find(t);
    if (it == lim.end()) it = lim.emplace(t, limit.eval("t", Interval(t), sc.bits)).first;
    ++r.evaluations;
    return abs(seq.at(n, t, sc.bits) - it->second);
  };

  std::vector<std::optional<Interval>> at_n(pts.size());
  std::optional<std::size_t> alpha;
  for (std::size_t n = sc.max_index + 1; n-- > 0;) {
    bool ok = true;
    try {
      for (std::size_t i = 0; i < pts.size() && ok; ++i) {
        Interval d = dev(n, pts[i]);
        if (n == sc.max_index) at_n[i] = d;
        ok = d.hi <= hold;
      }
    } catch (const std::domain_error&) {
      ok = false;
    }
    if (!ok) break;
    alpha = n;
  }
  if (alpha) {
    r.status = Status::Holds;
    r.alpha = *alpha;
    r.detail = "within 2^-" + std::to_string(k + 1) + " on " + std::to_string(pts.size()) + " points of " + z.text() +
               " for n in [" + std::to_string(*alpha) + ", " + std::to_string(sc.max_index) + "]";
    return r;
  }

  // Witness search at N.
  const std::size_t N = sc.max_index;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (!at_n[i]) at_n[i] = dev(N, pts[i]);
  struct Sample {
    Rational t;
    Interval d;
  };
  std::vector<Sample> samples;
  for (std::size_t i = 0; i < pts.size(); ++i) samples.push_back({pts[i], *at_n[i]});
  auto best_of = [](const std::vector<Sample>& s) {
    return std::max_element(s.begin(), s.end(), [](const Sample& a, const Sample& b) { return a.d.lo < b.d.lo; });
  };
  Sample best = *best_of(samples);
  Rational h = (z.hi - z.lo) / Rational(static_cast<unsigned long>(pts.size()));
  for (std::size_t round = 0; round < sc.zoom_rounds && best.d.lo < fail; ++round) {
    std::vector<Sample> local;
    const unsigned long g = sc.grid;
    for (unsigned long i = 0; i <= g; ++i) {
      Rational t = best.t - h + 2 * h * Rational(i, g);
      if (z.contains(t)) local.push_back({t, dev(N, t)});
    }
    for (const auto& s : local) samples.push_back(s);
    if (!local.empty()) best = *best_of(local);
    if (best_of(samples)->d.lo > best.d.lo) best = *best_of(samples);
    h = 2 * h / Rational(g);
  }
  r.sup_lower = best.d.lo;
  if (best.d.lo < fail) {
    r.status = Status::Unknown;
    r.detail = "largest certified deviation at n = " + std::to_string(N) + " is " +
               std::to_string(to_double(best.d.lo)) + ", between the thresholds";
    return r;
  }
  // Bisect towards the nearest sample that is certainly below the threshold.
  std::optional<Rational> below;
  for (const auto& s : samples)
    if (s.d.hi < fail && (!below || abs(s.t - best.t) < abs(*below - best.t))) below = s.t;
  Sample hit = best;
  if (below) {
    Rational lo = *below;
    for (std::size_t i = 0; i < sc.bisections; ++i) {
      Rational mid = (lo + hit.t) / 2;
      Interval d = dev(N, mid);
      if (d.lo >= fail) hit = {mid, d};
      else if (d.hi < fail) lo = mid;
      else break;
    }
  }
  r.status = Status::Fails;
  r.witness = hit.t;
  r.deviation = hit.d;
  r.detail = "|f_" + std::to_string(N) + "(t) - f(t)| >= " + format_rational(fail) + " at t = " +
             std::to_string(to_double(hit.t));
  return r;
}

PointwiseCauchyResult pointwise_cauchy_check(const FunctionSeq& seq, const Expr& modulus, const Region& z,
                                             std::size_t grid, std::size_t horizon, std::size_t max_level) {
  PointwiseCauchyResult out;
  out.points = z.grid(grid);
  bool unknown = false;
  for (const Rational& t : out.points) {
    ModulusCauchySeq s;
    s.name = seq.name;
    s.at = [&seq, t](std::size_t n) {
      Interval v = seq.at(n, t);
      if (!v.exact()) throw InputError("term " + seq.term.text() + " is not exact at t = " + format_rational(t));
      return v.lo;
    };
    s.modulus = [&modulus, t](std::size_t k) {
      Env env;
      env.emplace("k", Interval(Rational(static_cast<unsigned long>(k))));
      env.emplace("t", Interval(t));
      auto v = modulus.eval_exact(env);
      if (!v || v->get_den() != 1 || *v < 0 || !v->get_num().fits_ulong_p())
        throw InputError("modulus " + modulus.text() + " is not a nonnegative integer");
      return static_cast<std::size_t>(v->get_num().get_ui());
    };
    out.per_point.push_back(cauchy_check(s, horizon, max_level));
    const Status st = out.per_point.back().status;
    if (st == Status::Fails && !out.witness) out.witness = t;
    unknown = unknown || st == Status::Unknown;
  }
  out.status = out.witness ? Status::Fails : unknown ? Status::Unknown : Status::Holds;
  return out;
}

bool RegularityReport::ok() const {
  return std::all_of(levels.begin(), levels.end(),
                     [](const RegularityLevel& l) { return l.factor_violations == 0 && l.limit_violations == 0; });
}

RegularityReport limit_regularity_suite(const FunctionSeq& seq, const Expr& limit, const Region& z,
                                        std::size_t max_level, const UcSchedule& sc) {
  if (!seq.modulus) throw PreconditionUnmet("sequence " + seq.name + " has no continuity modulus");
  RegularityReport rep;
  const auto pts = z.grid(sc.grid);
  for (std::size_t k = 0; k <= max_level; ++k) {
    UcResult uc = uniform_convergence_check(seq, limit, z, k + 1, sc);
    if (uc.status != Status::Holds)
      throw PreconditionUnmet("uniform convergence not established at level " + std::to_string(k + 1) + " (" +
                              to_string(uc.status) + ")");
    RegularityLevel lv;
    lv.level = k;
    lv.alpha = uc.alpha;
    Env env;
    env.emplace("n", Interval(Rational(static_cast<unsigned long>(uc.alpha))));
    env.emplace("k", Interval(Rational(static_cast<unsigned long>(k + 1))));
    auto delta = seq.modulus->eval_exact(env);
    if (!delta || *delta <= 0) throw InputError("modulus " + seq.modulus->text() + " is not a positive rational");
    lv.delta = *delta;
    const Rational factor_r = pow2(-static_cast<long>(k) - 1), limit_r = pow2(-static_cast<long>(k));
    for (const Rational& s : pts)
      for (const Rational& theta : {Rational(1, 2), Rational(255, 256)})
        for (int sign : {-1, 1}) {
          Rational t = s + sign * theta * lv.delta;
          if (!z.contains(t)) continue;
          ++lv.pairs;
          Interval df = abs(seq.at(uc.alpha, s, sc.bits) - seq.at(uc.alpha, t, sc.bits));
          Interval dl = abs(limit.eval("t", Interval(s), sc.bits) - limit.eval("t", Interval(t), sc.bits));
          auto where = [&] { return "s = " + format_rational(s) + ", t = " + format_rational(t); };
          if (!(df.hi < factor_r)) {
            if (lv.first_violation.empty()) lv.first_violation = "factor modulus at " + where();
            ++lv.factor_violations;
          }
          if (!(dl.hi < limit_r)) {
            if (lv.first_violation.empty()) lv.first_violation = "limit modulus at " + where();
            ++lv.limit_violations;
          }
        }
    rep.levels.push_back(std::move(lv));
  }
  return rep;
}

}  // namespace basespace
