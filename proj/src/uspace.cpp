#include "basespace/uspace.hpp"

#include <algorithm>
#include <numeric>

namespace basespace {

Relation Relation::diagonal(std::size_t n) {
  Relation r;
  for (Point x = 0; x < n; ++x) r.rows.push_back(PointSet::singleton(x));
  return r;
}

Relation Relation::full(std::size_t n) { return Relation{std::vector<PointSet>(n, PointSet::full(n))}; }

bool Relation::subset_of(const Relation& o) const {
  for (std::size_t x = 0; x < rows.size(); ++x)
    if (!rows[x].subset_of(o.rows.at(x))) return false;
  return true;
}

Relation Relation::inverse() const {
  Relation r{std::vector<PointSet>(rows.size())};
  for (Point x = 0; x < rows.size(); ++x) rows[x].for_each([&](Point y) { r.rows.at(y).insert(x); });
  return r;
}

Relation Relation::compose(const Relation& s) const {
  Relation r{std::vector<PointSet>(rows.size())};
  for (Point a = 0; a < rows.size(); ++a) rows[a].for_each([&](Point c) { r.rows[a] = r.rows[a] | s.rows.at(c); });
  return r;
}

Relation Relation::operator&(const Relation& o) const {
  Relation r = *this;
  for (std::size_t x = 0; x < rows.size(); ++x) r.rows[x] = rows[x] & o.rows.at(x);
  return r;
}

void check_ustructure(const UStructureFin& s) {
  if (!s.carrier || !s.aux) throw InputError("u-structure without carrier or aux space");
  const std::size_t n = s.carrier->point_count();
  if (s.table.size() != n) throw InputError("u-structure table has " + std::to_string(s.table.size()) + " rows, expected " + std::to_string(n));
  for (std::size_t x = 0; x < n; ++x) {
    if (s.table[x].size() != n) throw InputError("u-structure table row " + std::to_string(x) + " has the wrong length");
    for (Point z : s.table[x])
      if (z >= s.aux->point_count()) throw InputError("u-structure table value out of range in row " + std::to_string(x));
  }
  if (s.radii.empty()) throw InputError("u-structure without radii");
  for (std::size_t e = 0; e < s.radii.size(); ++e)
    if (!s.aux->is_open(s.radii[e])) throw InputError("radius r" + std::to_string(e) + " is not open in the aux space");
  if (!radii_intersection_closed(s)) throw InputError("radii are not closed under intersection");
}

bool radii_intersection_closed(const UStructureFin& s) {
  for (PointSet a : s.radii)
    for (PointSet b : s.radii)
      if (std::find(s.radii.begin(), s.radii.end(), a & b) == s.radii.end()) return false;
  return true;
}

PointSet ball(const UStructureFin& s, Point x, std::size_t radius) {
  if (radius >= s.radii.size()) throw InputError("radius index out of range");
  if (x >= s.table.size()) throw InputError("point index out of range");
  PointSet out;
  for (Point y = 0; y < s.table[x].size(); ++y)
    if (s.radii[radius].contains(s.table[x][y])) out.insert(y);
  return out;
}

Relation preimage_relation(const UStructureFin& s, std::size_t radius) {
  Relation r;
  for (Point x = 0; x < s.table.size(); ++x) r.rows.push_back(ball(s, x, radius));
  return r;
}

namespace {

constexpr std::size_t kMaxCarrier = 14;

// Opens of the topology in which O is open iff every x in O has one of
// balls[x] inside O.
std::vector<PointSet> opens_from_balls(const std::vector<std::vector<PointSet>>& balls) {
  const std::size_t n = balls.size();
  if (n > kMaxCarrier) throw InputError("carrier too large for the induced topology (cap " + std::to_string(kMaxCarrier) + ")");
  std::vector<PointSet> opens;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    PointSet o(m);
    bool ok = true;
    o.for_each([&](Point x) {
      if (!ok) return;
      ok = std::any_of(balls[x].begin(), balls[x].end(), [&](PointSet b) { return b.subset_of(o); });
    });
    if (ok) opens.push_back(o);
  }
  return opens;
}

std::vector<std::vector<PointSet>> all_balls(const UStructureFin& s) {
  std::vector<std::vector<PointSet>> balls(s.table.size());
  for (Point x = 0; x < s.table.size(); ++x)
    for (std::size_t e = 0; e < s.radii.size(); ++e) balls[x].push_back(ball(s, x, e));
  return balls;
}

PointSet relation_image(const UStructureFin& s, const Relation& r) {
  PointSet out;
  for (Point x = 0; x < r.size(); ++x) r.rows[x].for_each([&](Point y) { out.insert(s.u(x, y)); });
  return out;
}

std::string radius_name(const UStructureFin& s, std::size_t e) {
  return "r" + std::to_string(e) + " " + format_set(*s.aux, s.radii[e]);
}

}  // namespace

FinSpace induced_topology(const UStructureFin& s) {
  check_ustructure(s);
  return FinSpace(s.carrier->labels(), opens_from_balls(all_balls(s)));
}

bool is_u_space(const UStructureFin& s) { return induced_topology(s).opens() == s.carrier->opens(); }

std::optional<std::size_t> halving_failure(const UStructureFin& s) {
  std::vector<Relation> rel;
  for (std::size_t e = 0; e < s.radii.size(); ++e) rel.push_back(preimage_relation(s, e));
  for (std::size_t e = 0; e < s.radii.size(); ++e) {
    bool found = false;
    for (std::size_t f = 0; f < s.radii.size() && !found; ++f) {
      Relation sq = rel[f].compose(rel[f]);
      if (!sq.subset_of(rel[e])) continue;
      PointSet img = relation_image(s, sq);
      found = std::find(s.radii.begin(), s.radii.end(), img) != s.radii.end();
    }
    if (!found) return e;
  }
  return std::nullopt;
}

std::optional<std::size_t> symmetry_failure(const UStructureFin& s) {
  std::vector<Relation> rel;
  for (std::size_t e = 0; e < s.radii.size(); ++e) rel.push_back(preimage_relation(s, e));
  for (std::size_t e = 0; e < s.radii.size(); ++e) {
    Relation inv = rel[e].inverse();
    if (std::none_of(rel.begin(), rel.end(), [&](const Relation& r) { return r.subset_of(inv); })) return e;
  }
  return std::nullopt;
}

PointSet interior_via_balls(const UStructureFin& s, PointSet a) {
  check_ustructure(s);
  if (auto e = halving_failure(s)) throw PreconditionUnmet("halving condition fails at radius " + radius_name(s, *e));
  // The formula also needs x in B_eps(x); without it an empty ball puts x
  // into the interior of every set.
  for (Point x = 0; x < s.table.size(); ++x)
    for (std::size_t e = 0; e < s.radii.size(); ++e)
      if (!s.radii[e].contains(s.u(x, x)))
        throw PreconditionUnmet("ball of radius " + radius_name(s, e) + " around " + s.carrier->label(x) +
                                " misses its centre");
  PointSet out;
  for (Point x = 0; x < s.table.size(); ++x)
    for (std::size_t e = 0; e < s.radii.size(); ++e)
      if (ball(s, x, e).subset_of(a)) {
        out.insert(x);
        break;
      }
  return out;
}

namespace {

GradedBase base_from_balls(SpaceRef space, const std::vector<std::vector<PointSet>>& balls_by_level,
                           const std::string& prefix, bool raw_balls) {
  std::vector<BaseLevel> levels;
  for (std::size_t e = 0; e < balls_by_level.size(); ++e) {
    BaseLevel lvl{prefix + std::to_string(e), {}};
    for (std::size_t x = 0; x < balls_by_level[e].size(); ++x) {
      PointSet b = balls_by_level[e][x];
      PointSet m = raw_balls ? b : interior(*space, b);
      if (m.empty()) continue;
      auto idx = space->open_index(m);
      if (!idx)
        throw PreconditionUnmet("raw ball " + format_set(*space, b) + " at level " + lvl.label + " is not open");
      if (std::find(lvl.members.begin(), lvl.members.end(), *idx) == lvl.members.end()) lvl.members.push_back(*idx);
    }
    levels.push_back(std::move(lvl));
  }
  return GradedBase(std::move(space), std::move(levels));
}

}  // namespace

GradedBase induced_base(const UStructureFin& s, bool raw_balls) {
  auto space = std::make_shared<const FinSpace>(induced_topology(s));
  std::vector<std::vector<PointSet>> by_level(s.radii.size());
  for (std::size_t e = 0; e < s.radii.size(); ++e)
    for (Point x = 0; x < s.table.size(); ++x) by_level[e].push_back(ball(s, x, e));
  return base_from_balls(space, by_level, "r", raw_balls);
}

LsbSufficientReport lsb_sufficient_check(const UStructureFin& s) {
  check_ustructure(s);
  LsbSufficientReport r;
  r.intersection_closed = radii_intersection_closed(s);
  r.halving_failure = halving_failure(s);
  r.symmetry_failure = symmetry_failure(s);
  r.centred = true;
  for (Point x = 0; x < s.table.size(); ++x)
    for (PointSet e : s.radii) r.centred = r.centred && e.contains(s.u(x, x));
  GradedBase b = induced_base(s);
  r.base_validation = validate(b);
  if (r.base_validation.ok()) {
    r.lsb = classify_base(b).lsb;
  } else {
    r.lsb.status = Status::PreconditionUnmet;
    r.lsb.detail = "induced base does not validate: " + r.base_validation.issues.front().kind;
  }
  return r;
}

UStructureFin equality_indicator(SpaceRef carrier) {
  const std::size_t n = carrier->point_count();
  UStructureFin s{std::move(carrier), std::make_shared<const FinSpace>(FinSpace::discrete(2)), {}, {PointSet::of({0})}};
  for (Point x = 0; x < n; ++x) {
    s.table.emplace_back(n, 1);
    s.table[x][x] = 0;
  }
  return s;
}

UStructureFin cyclic_difference(std::size_t n, const std::vector<std::size_t>& divisors) {
  if (n == 0 || n > kMaxCarrier) throw InputError("cyclic group order out of range");
  std::vector<PointSet> subgroups;
  for (std::size_t d : divisors) {
    if (d == 0 || n % d != 0) throw InputError("subgroup generator must divide the group order");
    PointSet h;
    for (std::size_t k = 0; k < n; k += d) h.insert(k);
    if (std::find(subgroups.begin(), subgroups.end(), h) == subgroups.end()) subgroups.push_back(h);
  }
  // Close under intersection (intersections of subgroups are subgroups).
  for (std::size_t i = 0; i < subgroups.size(); ++i)
    for (std::size_t j = 0; j < subgroups.size(); ++j) {
      PointSet h = subgroups[i] & subgroups[j];
      if (std::find(subgroups.begin(), subgroups.end(), h) == subgroups.end()) subgroups.push_back(h);
    }
  // Cosets of every subgroup generate the topology on both sides.
  std::vector<PointSet> cosets;
  for (PointSet h : subgroups)
    for (std::size_t t = 0; t < n; ++t) {
      PointSet c;
      h.for_each([&](Point k) { c.insert((k + t) % n); });
      cosets.push_back(c);
    }
  auto top = std::make_shared<const FinSpace>(FinSpace::from_subbase(FinSpace::numeric_labels(n), cosets));
  UStructureFin s{top, top, {}, subgroups};
  for (Point x = 0; x < n; ++x) {
    s.table.emplace_back();
    for (Point y = 0; y < n; ++y) s.table[x].push_back((y + n - x) % n);
  }
  return s;
}

void check_uniformity(const UniformityFin& u) {
  if (!u.carrier) throw InputError("uniformity without carrier");
  const std::size_t n = u.carrier->point_count();
  if (u.entourages.empty()) throw InputError("uniformity without entourages");
  const Relation diag = Relation::diagonal(n);
  for (std::size_t i = 0; i < u.entourages.size(); ++i) {
    const auto& e = u.entourages[i];
    const std::string name = "entourage U" + std::to_string(i);
    if (e.size() != n) throw InputError(name + " has the wrong size");
    for (PointSet row : e.rows)
      if (!row.subset_of(PointSet::full(n))) throw InputError(name + " mentions a point out of range");
    if (!diag.subset_of(e)) throw InputError(name + " does not contain the diagonal");
    if (std::none_of(u.entourages.begin(), u.entourages.end(), [&](const Relation& v) { return v.compose(v).subset_of(e); }))
      throw InputError(name + " has no V with V o V inside it");
    Relation inv = e.inverse();
    if (std::none_of(u.entourages.begin(), u.entourages.end(), [&](const Relation& v) { return v.subset_of(inv); }))
      throw InputError(name + " has no V inside its inverse");
    // Filter base: the balls must generate a topology.
    for (std::size_t j = 0; j < u.entourages.size(); ++j) {
      Relation both = e & u.entourages[j];
      if (std::none_of(u.entourages.begin(), u.entourages.end(), [&](const Relation& w) { return w.subset_of(both); }))
        throw InputError(name + " and U" + std::to_string(j) + " have no entourage inside their intersection");
    }
  }
}

FinSpace uniform_topology(const std::vector<std::string>& labels, const std::vector<Relation>& entourages) {
  std::vector<std::vector<PointSet>> balls(labels.size());
  for (Point x = 0; x < labels.size(); ++x)
    for (const auto& e : entourages) balls[x].push_back(e.rows.at(x));
  return FinSpace(labels, opens_from_balls(balls));
}

GradedBase standard_base(const UniformityFin& u, bool raw_balls) {
  check_uniformity(u);
  FinSpace top = uniform_topology(u.carrier->labels(), u.entourages);
  if (top.opens() != u.carrier->opens()) throw InputError("carrier topology is not the uniform topology");
  std::vector<std::vector<PointSet>> by_level;
  for (const auto& e : u.entourages) by_level.push_back(e.rows);
  return base_from_balls(u.carrier, by_level, "U", raw_balls);
}

UStructureFin ustructure_from_uniformity(const UniformityFin& u) {
  check_uniformity(u);
  const std::size_t n = u.carrier->point_count();
  if (n * n > 16) throw InputError("carrier too large for the pair space");
  std::vector<std::string> pair_labels;
  for (Point x = 0; x < n; ++x)
    for (Point y = 0; y < n; ++y) pair_labels.push_back(u.carrier->label(x) + "," + u.carrier->label(y));
  auto as_set = [n](const Relation& r) {
    PointSet s;
    for (Point x = 0; x < n; ++x) r.rows[x].for_each([&](Point y) { s.insert(x * n + y); });
    return s;
  };
  std::vector<PointSet> radii;
  for (const auto& e : u.entourages)
    if (std::find(radii.begin(), radii.end(), as_set(e)) == radii.end()) radii.push_back(as_set(e));
  for (std::size_t i = 0; i < radii.size(); ++i)
    for (std::size_t j = 0; j < radii.size(); ++j) {
      PointSet m = radii[i] & radii[j];
      if (std::find(radii.begin(), radii.end(), m) == radii.end()) radii.push_back(m);
    }
  auto aux = std::make_shared<const FinSpace>(pair_labels, FinSpace::discrete(n * n).opens());
  UStructureFin s{u.carrier, aux, {}, radii};
  for (Point x = 0; x < n; ++x) {
    s.table.emplace_back();
    for (Point y = 0; y < n; ++y) s.table[x].push_back(x * n + y);
  }
  return s;
}

UCauchyResult u_cauchy_check(const std::function<Rational(std::size_t)>& seq, const DensePresentation& p,
                             std::size_t horizon, std::size_t level) {
  UCauchyResult r;
  r.window_start = (horizon + 1) / 2;
  std::vector<Rational> vals;
  for (std::size_t n = r.window_start; n <= horizon; ++n) vals.push_back(seq(n));
  bool unknown = false;
  for (std::size_t b = 1; b < vals.size(); ++b)
    for (std::size_t a = 0; a < b; ++a) {
      Status st = in_radius(p, vals[a], vals[b], level);
      if (st == Status::Fails) {
        r.status = Status::Fails;
        r.i = r.window_start + a;
        r.j = r.window_start + b;
        r.detail = "u(s_" + std::to_string(r.i) + ", s_" + std::to_string(r.j) + ") is outside eps_" + std::to_string(level);
        return r;
      }
      if (st == Status::Unknown && !unknown) {
        unknown = true;
        r.i = r.window_start + a;
        r.j = r.window_start + b;
      }
    }
  if (unknown) {
    r.status = Status::Unknown;
    r.detail = "membership undecided at maximum precision";
    return r;
  }
  r.status = Status::Holds;
  return r;
}

}  // namespace basespace
