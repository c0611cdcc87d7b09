#include "basespace/net.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace basespace {

LassoNet constant_net(Point x) { return LassoNet{{}, {x}}; }

LassoNet normalize(const LassoNet& u) {
  LassoNet out = u;
  auto& c = out.cycle;
  for (std::size_t p = 1; p <= c.size(); ++p) {
    if (c.size() % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < c.size() && periodic; ++i) periodic = c[i] == c[i - p];
    if (periodic) {
      c.resize(p);
      break;
    }
  }
  // Fold prefix entries that already agree with the cycle read backwards.
  while (!out.prefix.empty() && out.prefix.back() == c.back()) {
    out.prefix.pop_back();
    std::rotate(c.rbegin(), c.rbegin() + 1, c.rend());
  }
  return out;
}

void check_net(const LassoNet& u, std::size_t n) {
  if (u.cycle.empty()) throw InputError("net cycle is empty");
  auto bad = [n](Point p) { return p >= n; };
  if (std::any_of(u.prefix.begin(), u.prefix.end(), bad) || std::any_of(u.cycle.begin(), u.cycle.end(), bad))
    throw InputError("net value outside the space");
}

PointSet recurrent_set(const LassoNet& u) {
  PointSet s;
  for (Point p : u.cycle) s.insert(p);
  return s;
}

PointSet tail_set(const LassoNet& u, std::size_t from) {
  PointSet s;
  const std::size_t end = std::max(from, u.prefix.size()) + u.cycle.size();
  for (std::size_t n = from; n < end; ++n) s.insert(u.at(n));
  return s;
}

std::size_t SubnetSpec::index(std::size_t n) const {
  std::size_t idx = start;
  for (std::size_t k = 0; k < n; ++k) idx += increments.at(k);
  return idx;
}

void check_subnet(const SubnetSpec& phi) {
  const auto& inc = phi.increments;
  if (inc.cycle.empty()) throw InputError("subnet increment cycle is empty");
  auto zero = [](std::size_t d) { return d == 0; };
  if (std::any_of(inc.prefix.begin(), inc.prefix.end(), zero) || std::any_of(inc.cycle.begin(), inc.cycle.end(), zero))
    throw InputError("subnet increments must be positive");
}

LassoNet compose_subnet(const LassoNet& u, const SubnetSpec& phi) {
  check_subnet(phi);
  const auto& inc = phi.increments;
  const std::size_t step = std::accumulate(inc.cycle.begin(), inc.cycle.end(), std::size_t{0});
  const std::size_t c = u.cycle.size();
  // Past the increment prefix and u's prefix, n -> u(phi(n)) repeats after
  // |inc.cycle| * c / gcd(step, c) steps.
  const std::size_t period = inc.cycle.size() * (c / std::gcd(step, c));
  std::size_t n0 = inc.prefix.size();
  std::size_t idx = phi.index(n0);
  while (idx < u.prefix.size()) idx += inc.at(n0++);
  LassoNet out;
  idx = phi.start;
  for (std::size_t n = 0; n < n0 + period; ++n) {
    (n < n0 ? out.prefix : out.cycle).push_back(u.at(idx));
    idx += inc.at(n);
  }
  return normalize(out);
}

bool is_aa_subnet(const LassoNet& u, const LassoNet& v) { return recurrent_set(u).subset_of(recurrent_set(v)); }

FinFilter derived_filter(const LassoNet& u, SpaceRef space) {
  check_net(u, space->point_count());
  PointSet core = space->open_hull(recurrent_set(u));
  return FinFilter{std::move(space), core, true};
}

std::vector<LassoNet> filter_derived_net_samples(const FinFilter& f, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw InputError("sample count must be positive");
  if (f.core.empty()) throw InputError("filter core is empty");
  std::vector<LassoNet> out;
  out.push_back(constant_net(f.core.first()));
  std::mt19937_64 rng(seed);
  auto pick = [&](PointSet s) {
    auto pts = s.points();
    return pts[rng() % pts.size()];
  };
  while (out.size() < count) {
    // Chain X = A_0 > A_1 > ... > core, dropping one outside point at a time.
    auto outside = f.space->full().minus(f.core).points();
    for (std::size_t i = outside.size(); i > 1; --i) std::swap(outside[i - 1], outside[rng() % i]);
    LassoNet w;
    PointSet member = f.space->full();
    for (Point drop : outside) {
      w.prefix.push_back(pick(member));
      member.erase(drop);
    }
    w.cycle.push_back(pick(f.core));
    out.push_back(normalize(w));
  }
  return out;
}

LassoNet LassoBiNet::column(std::size_t j) const {
  LassoNet out;
  for (std::size_t i = 0; i < rows(); ++i) (i < row_prefix ? out.prefix : out.cycle).push_back(table[i][j]);
  return out;
}

void check_binet(const LassoBiNet& u, std::size_t n) {
  if (u.rows() <= u.row_prefix || u.cols() <= u.col_prefix) throw InputError("bi-net cycles must be nonempty");
  for (const auto& row : u.table) {
    if (row.size() != u.cols()) throw InputError("bi-net table is ragged");
    for (Point p : row)
      if (p >= n) throw InputError("bi-net value outside the space");
  }
}

PointSet recurrent_set(const LassoBiNet& u) {
  PointSet s;
  for (std::size_t i = u.row_prefix; i < u.rows(); ++i)
    for (std::size_t j = u.col_prefix; j < u.cols(); ++j) s.insert(u.table[i][j]);
  return s;
}

std::string format_net(const FinSpace& space, const LassoNet& u) {
  auto list = [&](const std::vector<Point>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + space.label(v[i]);
    return s + "]";
  };
  return "prefix " + list(u.prefix) + " cycle " + list(u.cycle);
}

}  // namespace basespace
