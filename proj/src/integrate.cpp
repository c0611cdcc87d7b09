#include "basespace/integrate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace basespace {

namespace {

Rational reduce_mod(const Rational& x, unsigned long p, const char* what) {
  if (x.get_den() != 1) throw InputError(std::string(what) + " " + format_rational(x) + " is not an integer mod p");
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), x.get_num_mpz_t(), p);
  return Rational(r);
}

// Closed end on the universe boundary, ownership by rule elsewhere.
Atom own(Rational lo, Rational hi, TagRule rule, const Rational& a, const Rational& b) {
  Atom at{std::move(lo), std::move(hi), true, false, std::nullopt};
  if (rule == TagRule::Right) {
    at.lo_closed = at.lo == a;
    at.hi_closed = true;
  } else {
    at.hi_closed = at.hi == b;
  }
  return at;
}

// sum += s * m without temporaries beyond `tmp`; mod-p reduction is left to
// the caller.
void accumulate(Element& sum, const ModuleSpec& mod, const Scalar& s, const Element& m, Rational& tmp) {
  if (mod.kind == ModuleSpec::Kind::Complex) {
    for (std::size_t i = 0; i < mod.dim; ++i) {
      tmp = s[0] * m[2 * i];
      sum[2 * i] += tmp;
      tmp = s[1] * m[2 * i + 1];
      sum[2 * i] -= tmp;
      tmp = s[0] * m[2 * i + 1];
      sum[2 * i + 1] += tmp;
      tmp = s[1] * m[2 * i];
      sum[2 * i + 1] += tmp;
    }
    return;
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    tmp = s[0] * m[i];
    sum[i] += tmp;
  }
}

// Integrand evaluation with one reusable environment.
struct Evaluator {
  const Integrand& f;
  const ModuleSpec& mod;
  Env env{{"t", Interval(Rational(0))}};

  Scalar at(const Rational& t) {
    if (f.parts.empty()) return f.at(t, mod);
    env.begin()->second = Interval(t);
    Scalar s;
    s.reserve(f.parts.size());
    for (const auto& e : f.parts) {
      auto v = e.eval_exact(env);
      if (!v) throw InputError("integrand " + e.text() + " is not exact at t = " + format_rational(t));
      s.push_back(std::move(*v));
    }
    return mod.normalize_scalar(std::move(s));
  }
};

bool same_place(const Atom& x, const Atom& y) { return x.label == y.label && x.lo == y.lo && x.hi == y.hi; }

}  // namespace

ModuleSpec ModuleSpec::parse(const std::string& text) {
  auto fail = [&]() -> ModuleSpec { throw InputError("module '" + text + "': expected real:n, complex:k or modp:p[:m]"); };
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  auto number = [&](const std::string& s) -> unsigned long {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 9) fail();
    return std::stoul(s);
  };
  if (parts.empty()) return fail();
  ModuleSpec m;
  if (parts[0] == "real" || parts[0] == "complex") {
    if (parts.size() > 2) return fail();
    m.kind = parts[0] == "real" ? Kind::Real : Kind::Complex;
    m.dim = parts.size() == 2 ? number(parts[1]) : 1;
  } else if (parts[0] == "modp") {
    if (parts.size() < 2 || parts.size() > 3) return fail();
    m.kind = Kind::ModP;
    m.p = number(parts[1]);
    m.dim = parts.size() == 3 ? number(parts[2]) : 1;
    if (m.p < 2) throw InputError("module '" + text + "': p must be at least 2");
    for (unsigned long d = 2; d * d <= m.p; ++d)
      if (m.p % d == 0) throw InputError("module '" + text + "': " + std::to_string(m.p) + " is not prime");
  } else {
    return fail();
  }
  if (m.dim == 0) return fail();
  return m;
}

std::string ModuleSpec::text() const {
  switch (kind) {
    case Kind::Real: return "real:" + std::to_string(dim);
    case Kind::Complex: return "complex:" + std::to_string(dim);
    case Kind::ModP: return "modp:" + std::to_string(p) + (dim == 1 ? "" : ":" + std::to_string(dim));
  }
  return "?";
}

Element ModuleSpec::add(const Element& a, const Element& b) const {
  Element out(components());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.at(i) + b.at(i);
  return kind == Kind::ModP ? normalize(std::move(out)) : out;
}

Element ModuleSpec::neg(const Element& a) const {
  Element out(components());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = -a.at(i);
  return kind == Kind::ModP ? normalize(std::move(out)) : out;
}

Element ModuleSpec::scale(const Scalar& s, const Element& a) const {
  Element out(components());
  if (kind == Kind::Complex) {
    for (std::size_t i = 0; i < dim; ++i) {
      const Rational &re = a.at(2 * i), &im = a.at(2 * i + 1);
      out[2 * i] = s.at(0) * re - s.at(1) * im;
      out[2 * i + 1] = s.at(0) * im + s.at(1) * re;
    }
    return out;
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s.at(0) * a.at(i);
  return kind == Kind::ModP ? normalize(std::move(out)) : out;
}

Rational ModuleSpec::distance(const Element& a, const Element& b) const {
  if (kind == Kind::ModP) return a == b ? Rational(0) : Rational(1);
  Rational d = 0;
  for (std::size_t i = 0; i < components(); ++i) d = std::max(d, Rational(abs(a.at(i) - b.at(i))));
  return d;
}

Element ModuleSpec::normalize(Element a) const {
  if (a.size() != components())
    throw InputError("module " + text() + " element needs " + std::to_string(components()) + " components, got " +
                     std::to_string(a.size()));
  if (kind == Kind::ModP)
    for (auto& x : a) x = reduce_mod(x, p, "component");
  return a;
}

Scalar ModuleSpec::normalize_scalar(Scalar s) const {
  if (s.size() != scalar_components())
    throw InputError("module " + text() + " scalar needs " + std::to_string(scalar_components()) + " components");
  if (kind == Kind::ModP) s[0] = reduce_mod(s[0], p, "scalar");
  return s;
}

const char* to_string(TagRule r) {
  switch (r) {
    case TagRule::Left: return "left";
    case TagRule::Right: return "right";
    case TagRule::Midpoint: return "midpoint";
    case TagRule::Third: return "third";
    case TagRule::Swap: return "swap";
  }
  return "?";
}

TagRule parse_tag_rule(const std::string& text) {
  for (TagRule r : {TagRule::Left, TagRule::Right, TagRule::Midpoint, TagRule::Third, TagRule::Swap})
    if (text == to_string(r)) return r;
  throw InputError("unknown tag rule '" + text + "' (left, right, midpoint, third, swap)");
}

bool Atom::contains(const Rational& t) const {
  if (label) return t == Rational(static_cast<unsigned long>(*label));
  return (t > lo || (lo_closed && t == lo)) && (t < hi || (hi_closed && t == hi));
}

bool Atom::inside(const Atom& parent) const {
  if (label || parent.label) return label == parent.label;
  if (lo < parent.lo || hi > parent.hi) return false;
  if (lo == parent.lo && lo_closed && !parent.lo_closed) return false;
  if (hi == parent.hi && hi_closed && !parent.hi_closed) return false;
  return true;
}

AtomAlgebra AtomAlgebra::finite(std::vector<std::string> labels) {
  if (labels.empty()) throw InputError("finite universe needs at least one label");
  std::set<std::string> seen;
  for (const auto& l : labels)
    if (!seen.insert(l).second) throw InputError("duplicate universe label '" + l + "'");
  AtomAlgebra a;
  a.labels_ = std::move(labels);
  a.a_ = 0;
  a.b_ = static_cast<unsigned long>(a.labels_.size() - 1);
  return a;
}

AtomAlgebra AtomAlgebra::interval(Rational a, Rational b, std::vector<Rational> breakpoints) {
  if (!(a < b)) throw InputError("interval universe needs a < b");
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  for (const auto& x : breakpoints)
    if (!(a < x && x < b)) throw InputError("breakpoint " + format_rational(x) + " is not inside the interval");
  AtomAlgebra out;
  out.a_ = std::move(a);
  out.b_ = std::move(b);
  out.breaks_ = std::move(breakpoints);
  return out;
}

std::vector<Atom> AtomAlgebra::initial(TagRule rule) const {
  std::vector<Atom> out;
  if (is_finite()) {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      Rational x(static_cast<unsigned long>(i));
      out.push_back(Atom{x, x, true, true, i});
    }
    return out;
  }
  std::vector<Rational> pts{a_};
  pts.insert(pts.end(), breaks_.begin(), breaks_.end());
  pts.push_back(b_);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) out.push_back(own(pts[i], pts[i + 1], rule, a_, b_));
  return out;
}

std::vector<Atom> AtomAlgebra::children(const Atom& at, TagRule rule) const {
  if (at.label) return {at};
  if (!(at.lo < at.hi)) throw InputError("refinement is not defined for an empty block");
  Rational m = (at.lo + at.hi) / 2;
  Atom left{at.lo, m, at.lo_closed, rule == TagRule::Right, std::nullopt};
  Atom right{m, at.hi, rule != TagRule::Right, at.hi_closed, std::nullopt};
  return {left, right};
}

std::string AtomAlgebra::describe(const Atom& at) const {
  if (at.label) return labels_.at(*at.label);
  return std::string(at.lo_closed ? "[" : "(") + format_rational(at.lo) + ", " + format_rational(at.hi) +
         (at.hi_closed ? "]" : ")");
}

Atom empty_atom() { return Atom{0, 0, false, false, std::nullopt}; }

VectorMeasure length_measure(const ModuleSpec& mod, Element unit) {
  if (unit.empty()) {
    unit = mod.zero();
    unit[0] = 1;
  }
  unit = mod.normalize(unit);
  return {[mod, unit](const Atom& a) {
            if (a.label) throw InputError("length measure needs an interval universe");
            Scalar len(mod.scalar_components(), Rational(0));
            len[0] = a.hi - a.lo;
            return mod.scale(len, unit);
          },
          "length"};
}

VectorMeasure table_measure(const ModuleSpec& mod, std::vector<Element> values) {
  for (auto& v : values) v = mod.normalize(v);
  return {[mod, values](const Atom& a) {
            if (!a.label) {
              if (a.lo == a.hi && !a.lo_closed) return mod.zero();
              throw InputError("table measure needs a finite universe");
            }
            if (*a.label >= values.size()) throw InputError("no measure value for label " + std::to_string(*a.label));
            return values[*a.label];
          },
          "table"};
}

VectorMeasure zero_measure(const ModuleSpec& mod) {
  return {[mod](const Atom&) { return mod.zero(); }, "zero"};
}

VectorMeasure with_override(VectorMeasure mu, Atom atom, Element value) {
  auto base = mu.value;
  mu.value = [base, atom, value](const Atom& a) { return same_place(a, atom) ? value : base(a); };
  mu.name += "*";
  return mu;
}

Integrand Integrand::expression(const std::string& text) { return {{Expr::parse(text)}, {}, text}; }

Integrand Integrand::complex_expression(const std::string& re, const std::string& im) {
  return {{Expr::parse(re), Expr::parse(im)}, {}, re + " + i(" + im + ")"};
}

Integrand Integrand::of_table(std::vector<Scalar> values) { return {{}, std::move(values), "table"}; }

Scalar Integrand::at(const Rational& t, const ModuleSpec& mod) const {
  if (parts.empty()) {
    if (t.get_den() != 1 || t < 0 || t >= static_cast<unsigned long>(table.size()))
      throw InputError("integrand table has no value at " + format_rational(t));
    return mod.normalize_scalar(table[t.get_num().get_ui()]);
  }
  Evaluator eval{*this, mod};
  return eval.at(t);
}

Rational rule_tag(const Atom& a, TagRule rule, std::size_t depth) {
  if (a.label) return Rational(static_cast<unsigned long>(*a.label));
  const Rational w = a.hi - a.lo;
  switch (rule) {
    case TagRule::Left: return a.lo;
    case TagRule::Right: return a.hi;
    case TagRule::Midpoint: return a.lo + w / 2;
    case TagRule::Third: return a.lo + w / 3;
    case TagRule::Swap: return depth % 2 == 0 ? a.lo : Rational(a.lo + w / 3);
  }
  return a.lo;
}

IndexedPartition initial_partition(const AtomAlgebra& alg, TagRule rule) {
  IndexedPartition p;
  p.rule = rule;
  for (auto& a : alg.initial(rule)) {
    Rational t = rule_tag(a, rule, 0);
    p.blocks.push_back({std::move(a), std::move(t)});
  }
  return p;
}

namespace {

IndexedPartition split(const AtomAlgebra& alg, const IndexedPartition& part) {
  IndexedPartition out;
  out.rule = part.rule;
  out.depth = part.depth + 1;
  out.blocks.reserve(part.blocks.size() * 2);
  if (!alg.is_finite()) {
    const bool right = part.rule == TagRule::Right;
    Rational m;
    for (const auto& b : part.blocks) {
      m = b.atom.lo + b.atom.hi;
      m /= 2;
      Atom left{b.atom.lo, m, b.atom.lo_closed, right, std::nullopt};
      Atom upper{m, b.atom.hi, !right, b.atom.hi_closed, std::nullopt};
      const bool keep_left = left.contains(b.tag);
      Rational t_left = keep_left ? b.tag : rule_tag(left, part.rule, out.depth);
      Rational t_upper = keep_left ? rule_tag(upper, part.rule, out.depth) : b.tag;
      out.blocks.push_back({std::move(left), std::move(t_left)});
      out.blocks.push_back({std::move(upper), std::move(t_upper)});
    }
    return out;
  }
  for (const auto& b : part.blocks)
    for (auto& c : alg.children(b.atom, part.rule)) {
      Rational t = c.contains(b.tag) ? b.tag : rule_tag(c, part.rule, out.depth);
      out.blocks.push_back({std::move(c), std::move(t)});
    }
  return out;
}

}  // namespace

IndexedPartition refine(const AtomAlgebra& alg, const IndexedPartition& part) {
  check_partition(alg, part);
  return split(alg, part);
}

void check_partition(const AtomAlgebra& alg, const IndexedPartition& part) {
  if (part.blocks.empty()) throw InputError("partition has no blocks");
  for (const auto& b : part.blocks)
    if (!b.atom.contains(b.tag))
      throw InputError("tag " + format_rational(b.tag) + " lies outside its block " + alg.describe(b.atom));
  if (alg.is_finite()) {
    std::set<std::size_t> seen;
    for (const auto& b : part.blocks)
      if (!b.atom.label || *b.atom.label >= alg.labels().size() || !seen.insert(*b.atom.label).second)
        throw InputError("blocks do not partition the finite universe");
    if (seen.size() != alg.labels().size()) throw InputError("blocks do not cover the finite universe");
    return;
  }
  const auto& bl = part.blocks;
  if (bl.front().atom.lo != alg.lo() || !bl.front().atom.lo_closed || bl.back().atom.hi != alg.hi() ||
      !bl.back().atom.hi_closed)
    throw InputError("blocks do not cover the interval ends");
  for (std::size_t i = 0; i < bl.size(); ++i) {
    if (!(bl[i].atom.lo < bl[i].atom.hi)) throw InputError("empty block " + alg.describe(bl[i].atom));
    if (i + 1 < bl.size() &&
        (bl[i].atom.hi != bl[i + 1].atom.lo || bl[i].atom.hi_closed == bl[i + 1].atom.lo_closed))
      throw InputError("blocks " + alg.describe(bl[i].atom) + " and " + alg.describe(bl[i + 1].atom) +
                       " do not meet in exactly one owner");
  }
}

bool is_refinement(const IndexedPartition& fine, const IndexedPartition& coarse) {
  std::set<Rational> tags;
  for (const auto& b : fine.blocks) tags.insert(b.tag);
  for (const auto& b : coarse.blocks)
    if (!tags.contains(b.tag)) return false;
  for (const auto& f : fine.blocks) {
    bool found = false;
    if (f.atom.label) {
      found = std::any_of(coarse.blocks.begin(), coarse.blocks.end(),
                          [&](const TaggedBlock& c) { return f.atom.inside(c.atom); });
    } else {
      // Blocks are ordered; the candidate is the last coarse block starting at or before f.
      auto it = std::upper_bound(coarse.blocks.begin(), coarse.blocks.end(), f.atom.lo,
                                 [](const Rational& x, const TaggedBlock& c) { return x < c.atom.lo; });
      for (int step = 0; step < 2 && it != coarse.blocks.begin() && !found; ++step) {
        --it;
        found = f.atom.inside(it->atom);
      }
    }
    if (!found) return false;
  }
  return true;
}

Element riemann_value(const Integrand& f, const IndexedPartition& part, const VectorMeasure& mu,
                      const ModuleSpec& mod) {
  Element sum = mod.zero();
  for (const auto& b : part.blocks) {
    if (!b.atom.contains(b.tag)) throw InputError("tag " + format_rational(b.tag) + " lies outside its block");
    sum = mod.add(sum, mod.scale(f.at(b.tag, mod), mu.value(b.atom)));
  }
  return sum;
}

const char* to_string(IntegrateResult::Outcome o) {
  switch (o) {
    case IntegrateResult::Outcome::Converged: return "converged";
    case IntegrateResult::Outcome::Diverged: return "diverged";
    case IntegrateResult::Outcome::Undecided: return "undecided";
  }
  return "?";
}

IntegrateResult integrate(const Integrand& f, const AtomAlgebra& alg, const VectorMeasure& mu, const ModuleSpec& mod,
                          const IntegrateOptions& opt) {
  IntegrateResult res;
  const std::size_t from = (opt.depth + 1) / 2;
  res.tol = opt.tol ? *opt.tol : pow2(-static_cast<long>(from));
  if (res.tol < 0) throw InputError("tolerance must be nonnegative");

  const std::vector<TagRule> rules{TagRule::Left, TagRule::Right, TagRule::Midpoint, TagRule::Third};
  Evaluator eval{f, mod};
  IndexedPartition part = initial_partition(alg, opt.tags);
  check_partition(alg, part);
  std::vector<Element> mus, prev_mus;
  std::vector<std::pair<std::string, Element>> last_values;
  Rational tmp, w, t_mid, t_third;
  Scalar v_right, v_mid, v_third, v_chain;
  for (std::size_t d = 0; d <= opt.depth; ++d) {
    if (d > 0) part = split(alg, part);
    prev_mus = std::move(mus);
    mus.clear();
    mus.reserve(part.blocks.size());
    // Read once per block and shared by every tag rule.
    for (const auto& b : part.blocks) mus.push_back(mu.value(b.atom));
    if (d > 0 && !alg.is_finite())
      for (std::size_t i = 0; i < prev_mus.size(); ++i)
        if (mod.distance(mod.add(mus[2 * i], mus[2 * i + 1]), prev_mus[i]) != 0)
          throw PreconditionUnmet("measure is not additive on " +
                                  alg.describe(Atom{part.blocks[2 * i].atom.lo, part.blocks[2 * i + 1].atom.hi,
                                                    part.blocks[2 * i].atom.lo_closed,
                                                    part.blocks[2 * i + 1].atom.hi_closed, std::nullopt}));

    const bool perturb = d >= from;
    std::vector<Element> sums(perturb ? 1 + rules.size() : 1, mod.zero());
    // f at left ends, shared by the left, right and chain rules.
    std::vector<Scalar> f_lo;
    if (perturb) {
      f_lo.reserve(part.blocks.size());
      for (const auto& b : part.blocks) f_lo.push_back(eval.at(b.atom.label ? b.tag : b.atom.lo));
    }
    for (std::size_t i = 0; i < part.blocks.size(); ++i) {
      const auto& b = part.blocks[i];
      if (!perturb) {
        accumulate(sums[0], mod, eval.at(b.tag), mus[i], tmp);
        continue;
      }
      const bool finite = b.atom.label.has_value();
      const Scalar* f_left = &f_lo[i];
      const Scalar *f_right = f_left, *f_mid = f_left, *f_third = f_left, *f_chain = f_left;
      if (!finite) {
        if (i + 1 < part.blocks.size() && part.blocks[i + 1].atom.lo == b.atom.hi) {
          f_right = &f_lo[i + 1];
        } else {
          v_right = eval.at(b.atom.hi);
          f_right = &v_right;
        }
        w = b.atom.hi - b.atom.lo;
        t_mid = w / 2;
        t_mid += b.atom.lo;
        t_third = w / 3;
        t_third += b.atom.lo;
        v_mid = eval.at(t_mid);
        v_third = eval.at(t_third);
        f_mid = &v_mid;
        f_third = &v_third;
        if (b.tag == b.atom.hi) {
          f_chain = f_right;
        } else if (b.tag != b.atom.lo) {
          v_chain = eval.at(b.tag);
          f_chain = &v_chain;
        }
      }
      accumulate(sums[0], mod, *f_chain, mus[i], tmp);
      accumulate(sums[1], mod, *f_left, mus[i], tmp);
      accumulate(sums[2], mod, *f_right, mus[i], tmp);
      accumulate(sums[3], mod, *f_mid, mus[i], tmp);
      accumulate(sums[4], mod, *f_third, mus[i], tmp);
    }
    for (auto& x : sums) x = mod.normalize(std::move(x));

    DepthEvidence ev;
    ev.depth = d;
    ev.chain = sums[0];
    ev.step = res.trace.empty() ? Rational(0) : mod.distance(ev.chain, res.trace.back().chain);
    if (perturb) {
      std::vector<std::pair<std::string, Element>> values{{std::string("chain-") + to_string(opt.tags), sums[0]}};
      for (std::size_t r = 0; r < rules.size(); ++r) values.emplace_back(to_string(rules[r]), sums[r + 1]);
      Rational spread = 0;
      std::size_t ia = 0, ib = 0;
      for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t k = i + 1; k < values.size(); ++k) {
          Rational dist = mod.distance(values[i].second, values[k].second);
          if (dist > spread) spread = dist, ia = i, ib = k;
        }
      ev.spread = spread;
      if (d == opt.depth) {
        res.rule_a = values[ia].first;
        res.rule_b = values[ib].first;
        res.value_a = values[ia].second;
        res.value_b = values[ib].second;
        last_values = std::move(values);
      }
    }
    res.trace.push_back(std::move(ev));
  }

  const DepthEvidence& last = res.trace.back();
  res.bound = *last.spread;
  if (mod.kind == ModuleSpec::Kind::ModP) {
    res.value = last.chain;
  } else {
    res.value = mod.zero();
    for (std::size_t c = 0; c < res.value.size(); ++c) {
      Rational lo = last_values[0].second[c], hi = lo;
      for (const auto& v : last_values) lo = std::min(lo, v.second[c]), hi = std::max(hi, v.second[c]);
      res.value[c] = (lo + hi) / 2;
    }
  }
  const bool persists = std::all_of(res.trace.begin() + static_cast<long>(from), res.trace.end(),
                                    [&](const DepthEvidence& e) { return *e.spread > res.tol; }) &&
                        res.bound >= *res.trace[from].spread;
  if (res.bound <= res.tol && last.step <= res.tol) {
    res.outcome = IntegrateResult::Outcome::Converged;
    res.detail = "spread and last step within " + format_rational(res.tol) + " at depth " + std::to_string(opt.depth);
  } else if (persists) {
    res.outcome = IntegrateResult::Outcome::Diverged;
    res.detail = "tag rules " + res.rule_a + " and " + res.rule_b + " stay more than " + format_rational(res.tol) +
                 " apart from depth " + std::to_string(from) + " to " + std::to_string(opt.depth) +
                 " without shrinking";
  } else {
    res.outcome = IntegrateResult::Outcome::Undecided;
    res.detail = "spread or step above " + format_rational(res.tol) + " at depth " + std::to_string(opt.depth);
  }
  return res;
}

MeasureReport measure_check(const AtomAlgebra& alg, const VectorMeasure& mu, const ModuleSpec& mod, std::size_t depth,
                            const Rational& tol) {
  MeasureReport r;
  r.empty_zero = mod.distance(mu.value(empty_atom()), mod.zero()) == 0;
  if (alg.is_finite()) return r;
  std::vector<Atom> level = alg.initial(TagRule::Left);
  const Rational limit = mod.kind == ModuleSpec::Kind::ModP ? Rational(0) : tol;
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<Atom> next;
    for (const Atom& a : level) {
      Element sum = mod.zero();
      for (auto& c : alg.children(a, TagRule::Left)) {
        sum = mod.add(sum, mu.value(c));
        next.push_back(std::move(c));
      }
      ++r.parents;
      Rational defect = mod.distance(sum, mu.value(a));
      r.max_defect = std::max(r.max_defect, defect);
      if (defect > limit && !r.failing_parent) r.failing_parent = alg.describe(a);
    }
    level = std::move(next);
  }
  return r;
}

std::string format_element(const Element& e, const ModuleSpec& mod) {
  auto one = [&](std::size_t i) {
    if (mod.kind != ModuleSpec::Kind::Complex) return format_rational(e.at(i));
    const Rational &re = e.at(2 * i), &im = e.at(2 * i + 1);
    return format_rational(re) + (im < 0 ? "-" : "+") + format_rational(abs(im)) + "i";
  };
  if (mod.dim == 1) return one(0);
  std::string s = "(";
  for (std::size_t i = 0; i < mod.dim; ++i) s += (i ? ", " : "") + one(i);
  return s + ")";
}

}  // namespace basespace
