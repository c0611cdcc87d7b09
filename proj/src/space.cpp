#include "basespace/space.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <unordered_map>

namespace basespace {

namespace {

std::vector<PointSet> canonical(std::vector<PointSet> sets) {
  std::sort(sets.begin(), sets.end(), CanonicalLess{});
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  return sets;
}

// All unions of the given generators, including the empty union.
std::vector<PointSet> union_closure(const std::vector<PointSet>& gens) {
  std::unordered_set<PointSet> seen{PointSet{}};
  std::vector<PointSet> out{PointSet{}};
  for (PointSet g : gens) {
    std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
      PointSet u = out[i] | g;
      if (seen.insert(u).second) out.push_back(u);
    }
  }
  return out;
}

}  // namespace

FinSpace::FinSpace(std::vector<std::string> labels, std::vector<PointSet> opens)
    : labels_(std::move(labels)), opens_(canonical(std::move(opens))) {
  if (labels_.size() > PointSet::kMaxPoints) throw InputError("space has more than 64 points");
  open_set_.insert(opens_.begin(), opens_.end());
  minimal_.assign(labels_.size(), full());
  for (PointSet o : opens_)
    o.for_each([&](Point p) {
      if (p < minimal_.size()) minimal_[p] &= o;
    });
}

FinSpace FinSpace::from_subbase(std::vector<std::string> labels, std::span<const PointSet> subbase) {
  const std::size_t n = labels.size();
  PointSet all = PointSet::full(n);
  // The minimal neighbourhood of p in the generated topology is the
  // intersection of the subbase members containing p.
  std::vector<PointSet> minimal(n, all);
  for (PointSet s : subbase) {
    if (!s.subset_of(all)) throw InputError("subbase member mentions a point outside the space");
    s.for_each([&](Point p) { minimal[p] &= s; });
  }
  auto opens = union_closure(canonical(minimal));
  opens.push_back(all);
  return FinSpace(std::move(labels), std::move(opens));
}

std::vector<std::string> FinSpace::numeric_labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

FinSpace FinSpace::discrete(std::size_t n) {
  std::vector<PointSet> singles;
  for (Point p = 0; p < n; ++p) singles.push_back(PointSet::singleton(p));
  return from_subbase(numeric_labels(n), singles);
}

FinSpace FinSpace::indiscrete(std::size_t n) {
  return FinSpace(numeric_labels(n), {PointSet{}, PointSet::full(n)});
}

FinSpace FinSpace::sierpinski() {
  return FinSpace({"a", "b"}, {PointSet{}, PointSet::of({0}), PointSet::of({0, 1})});
}

std::optional<Point> FinSpace::find_point(std::string_view label) const {
  for (Point p = 0; p < labels_.size(); ++p)
    if (labels_[p] == label) return p;
  return std::nullopt;
}

Point FinSpace::point(std::string_view label) const {
  if (auto p = find_point(label)) return *p;
  throw InputError("unknown point label '" + std::string(label) + "'");
}

std::optional<std::size_t> FinSpace::open_index(PointSet s) const {
  auto it = std::lower_bound(opens_.begin(), opens_.end(), s, CanonicalLess{});
  if (it == opens_.end() || *it != s) return std::nullopt;
  return static_cast<std::size_t>(it - opens_.begin());
}

PointSet FinSpace::open_hull(PointSet s) const {
  PointSet out;
  s.for_each([&](Point p) { out |= minimal_open(p); });
  return out;
}

GradedBase::GradedBase(SpaceRef space, std::vector<BaseLevel> levels)
    : space_(std::move(space)), levels_(std::move(levels)) {
  std::sort(levels_.begin(), levels_.end(), [](const BaseLevel& a, const BaseLevel& b) { return a.label < b.label; });
  for (std::size_t i = 1; i < levels_.size(); ++i)
    if (levels_[i].label == levels_[i - 1].label) throw InputError("duplicate level label '" + levels_[i].label + "'");
  const auto& opens = space_->opens();
  kernels_.assign(space_->point_count(), space_->full());
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    for (std::size_t idx : levels_[l].members) {
      if (idx >= opens.size()) {
        indices_ok_ = false;
        continue;
      }
      all_.push_back({l, idx, opens[idx]});
      opens[idx].for_each([&](Point p) {
        if (p < kernels_.size()) kernels_[p] &= opens[idx];
      });
    }
  }
}

std::vector<PointSet> GradedBase::members(std::size_t level) const {
  std::vector<PointSet> out;
  for (std::size_t idx : levels_.at(level).members)
    if (idx < space_->opens().size()) out.push_back(space_->opens()[idx]);
  return out;
}

bool ValidationReport::has(std::string_view kind) const {
  return std::any_of(issues.begin(), issues.end(), [&](const ValidationIssue& i) { return i.kind == kind; });
}

ValidationReport validate(const FinSpace& space) {
  ValidationReport r;
  std::set<std::string> seen;
  for (const auto& l : space.labels())
    if (!seen.insert(l).second) r.issues.push_back({"labels", "duplicate point label '" + l + "'"});
  const PointSet all = space.full();
  if (!space.is_open(PointSet{})) r.issues.push_back({"topology", "empty set is not open"});
  if (!space.is_open(all)) r.issues.push_back({"topology", "full set is not open"});
  const auto& opens = space.opens();
  for (PointSet o : opens)
    if (!o.subset_of(all)) r.issues.push_back({"topology", "open set " + std::to_string(o.bits()) + " leaves the space"});
  for (std::size_t i = 0; i < opens.size(); ++i) {
    for (std::size_t j = i + 1; j < opens.size(); ++j) {
      if (!space.is_open(opens[i] | opens[j])) {
        r.issues.push_back({"topology", "union of " + format_set(space, opens[i]) + " and " +
                                            format_set(space, opens[j]) + " is not open"});
        return r;
      }
      if (!space.is_open(opens[i] & opens[j])) {
        r.issues.push_back({"topology", "intersection of " + format_set(space, opens[i]) + " and " +
                                            format_set(space, opens[j]) + " is not open"});
        return r;
      }
    }
  }
  return r;
}

ValidationReport validate(const GradedBase& base) {
  ValidationReport r = validate(base.space());
  const FinSpace& space = base.space();
  for (const auto& level : base.levels())
    for (std::size_t idx : level.members)
      if (idx >= space.opens().size())
        r.issues.push_back({"base-index", "level '" + level.label + "' references missing open " + std::to_string(idx)});
  if (base.levels().empty()) r.issues.push_back({"empty-level", "base has no levels"});
  for (std::size_t l = 0; l < base.levels().size(); ++l) {
    const auto members = base.members(l);
    if (members.empty()) {
      r.issues.push_back({"empty-level", "level '" + base.levels()[l].label + "' is empty"});
      continue;
    }
    PointSet cover;
    for (PointSet m : members) cover |= m;
    if (cover != space.full())
      r.issues.push_back({"non-cover", "level '" + base.levels()[l].label + "' does not cover " +
                                           format_set(space, space.full().minus(cover))});
  }
  for (PointSet o : space.opens()) {
    PointSet u;
    for (const auto& m : base.all_members())
      if (m.set.subset_of(o)) u |= m.set;
    if (u != o) {
      r.issues.push_back({"non-base", "open set " + format_set(space, o) + " is not a union of base members"});
      break;
    }
  }
  return r;
}

PointSet interior(const FinSpace& space, PointSet a) {
  PointSet out;
  for (Point p = 0; p < space.point_count(); ++p)
    if (space.minimal_open(p).subset_of(a)) out.insert(p);
  return out;
}

PointSet closure(const FinSpace& space, PointSet a) {
  return space.full().minus(interior(space, space.full().minus(a)));
}

bool is_nowhere_dense(const FinSpace& space, PointSet a) { return interior(space, closure(space, a)).empty(); }

bool is_hausdorff(const FinSpace& space) {
  const std::size_t n = space.point_count();
  for (Point x = 0; x < n; ++x)
    for (Point y = x + 1; y < n; ++y)
      if (space.minimal_open(x).intersects(space.minimal_open(y))) return false;
  return true;
}

bool is_regular(const FinSpace& space) {
  // The minimal neighbourhood is the only candidate inside itself.
  for (Point x = 0; x < space.point_count(); ++x)
    if (!closure(space, space.minimal_open(x)).subset_of(space.minimal_open(x))) return false;
  return true;
}

PointSet SpaceMap::image(PointSet s) const {
  PointSet out;
  s.for_each([&](Point p) { out.insert(table.at(p)); });
  return out;
}

PointSet SpaceMap::preimage(PointSet s) const {
  PointSet out;
  for (Point p = 0; p < table.size(); ++p)
    if (s.contains(table[p])) out.insert(p);
  return out;
}

void check_map(const SpaceMap& f) {
  if (!f.source || !f.target) throw InputError("map without source or target");
  if (f.table.size() != f.source->point_count())
    throw InputError("map table has " + std::to_string(f.table.size()) + " entries, source has " +
                     std::to_string(f.source->point_count()) + " points");
  for (Point t : f.table)
    if (t >= f.target->point_count()) throw InputError("map entry " + std::to_string(t) + " is not a target point");
}

bool is_continuous(const SpaceMap& f) {
  check_map(f);
  bool by_preimage = std::all_of(f.target->opens().begin(), f.target->opens().end(),
                                 [&](PointSet v) { return f.source->is_open(f.preimage(v)); });
  bool by_kernel = true;
  for (Point x = 0; x < f.source->point_count(); ++x)
    if (!f.image(f.source->minimal_open(x)).subset_of(f.target->minimal_open(f(x)))) by_kernel = false;
  if (by_preimage != by_kernel) throw std::logic_error("continuity routes disagree");
  return by_preimage;
}

Hausdorffization hausdorffize(const GradedBase& base) {
  const FinSpace& space = base.space();
  const std::size_t n = space.point_count();
  const auto& members = base.all_members();
  auto same = [&](Point x, Point y) {
    return std::all_of(members.begin(), members.end(),
                       [&](const auto& m) { return m.set.contains(x) == m.set.contains(y); });
  };
  std::vector<Point> cls(n);
  std::vector<std::vector<Point>> classes;
  for (Point x = 0; x < n; ++x) {
    std::size_t c = 0;
    while (c < classes.size() && !same(classes[c].front(), x)) ++c;
    if (c == classes.size()) classes.emplace_back();
    classes[c].push_back(x);
    cls[x] = c;
  }
  std::vector<std::string> labels;
  for (const auto& c : classes) {
    std::string l;
    for (Point p : c) l += (l.empty() ? "" : "~") + space.label(p);
    labels.push_back(l);
  }
  SpaceMap q;
  q.source = base.space_ref();
  q.table = cls;
  auto push = [&](PointSet s) {
    PointSet img;
    s.for_each([&](Point p) { img.insert(cls[p]); });
    return img;
  };
  std::vector<PointSet> qopens;
  for (PointSet o : space.opens())
    if (q.preimage(push(o)) == o) qopens.push_back(push(o));
  auto qspace = std::make_shared<const FinSpace>(std::move(labels), std::move(qopens));
  q.target = qspace;
  std::vector<BaseLevel> levels;
  for (std::size_t l = 0; l < base.levels().size(); ++l) {
    BaseLevel level{base.levels()[l].label, {}};
    for (PointSet m : base.members(l)) {
      auto idx = qspace->open_index(push(m));
      if (!idx) throw std::logic_error("base member image is not open in the quotient");
      if (std::find(level.members.begin(), level.members.end(), *idx) == level.members.end())
        level.members.push_back(*idx);
    }
    levels.push_back(std::move(level));
  }
  GradedBase qbase(qspace, std::move(levels));
  return {qspace, std::move(qbase), std::move(q)};
}

std::vector<FinSpace> enumerate_topologies(std::size_t n) {
  if (n > 5) throw InputError("topology enumeration is limited to 5 points");
  // Topologies on a finite set correspond to preorders; enumerate the
  // off-diagonal relation bits and keep the transitive ones.
  std::vector<std::pair<Point, Point>> offdiag;
  for (Point x = 0; x < n; ++x)
    for (Point y = 0; y < n; ++y)
      if (x != y) offdiag.emplace_back(x, y);
  std::vector<FinSpace> out;
  const auto labels = FinSpace::numeric_labels(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << offdiag.size()); ++mask) {
    std::vector<PointSet> up(n);
    for (Point x = 0; x < n; ++x) up[x] = PointSet::singleton(x);
    for (std::size_t b = 0; b < offdiag.size(); ++b)
      if ((mask >> b) & 1U) up[offdiag[b].first].insert(offdiag[b].second);
    bool transitive = true;
    for (Point x = 0; x < n && transitive; ++x)
      up[x].for_each([&](Point y) {
        if (!up[y].subset_of(up[x])) transitive = false;
      });
    if (!transitive) continue;
    out.push_back(FinSpace::from_subbase(labels, up));
  }
  return out;
}

GradedBase kernel_base(SpaceRef space) {
  std::vector<PointSet> mins;
  for (Point p = 0; p < space->point_count(); ++p) mins.push_back(space->minimal_open(p));
  mins = canonical(std::move(mins));
  BaseLevel level{"e0", {}};
  for (PointSet m : mins) level.members.push_back(*space->open_index(m));
  return GradedBase(std::move(space), {level});
}

GradedBase open_base(SpaceRef space) {
  BaseLevel level{"e0", {}};
  for (std::size_t i = 0; i < space->opens().size(); ++i)
    if (!space->opens()[i].empty()) level.members.push_back(i);
  return GradedBase(std::move(space), {level});
}

GradedBase regrade_split(const GradedBase& base) {
  const auto& space = base.space_ref();
  const std::size_t full = *space->open_index(space->full());
  std::vector<std::size_t> seen;
  std::vector<BaseLevel> levels;
  for (const auto& m : base.all_members()) {
    if (std::find(seen.begin(), seen.end(), m.open_index) != seen.end()) continue;
    seen.push_back(m.open_index);
    char label[16];
    std::snprintf(label, sizeof label, "s%03zu", levels.size());
    BaseLevel level{label, {m.open_index}};
    if (m.open_index != full) level.members.push_back(full);
    levels.push_back(std::move(level));
  }
  return GradedBase(space, std::move(levels));
}

std::string format_set(const FinSpace& space, PointSet s) {
  std::string out = "{";
  bool first = true;
  s.for_each([&](Point p) {
    if (!first) out += ",";
    first = false;
    out += p < space.point_count() ? space.label(p) : "#" + std::to_string(p);
  });
  return out + "}";
}

}  // namespace basespace
