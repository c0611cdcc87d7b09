#include "basespace/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace basespace {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw InputError(where + ": " + what); }

// Runs `f`, prefixing library errors with the object being read.
template <typename F>
auto guarded(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const InputError& e) {
    const std::string msg = e.what();
    if (msg.rfind(where, 0) == 0) throw;
    fail(where, msg);
  } catch (const std::domain_error& e) {
    fail(where, e.what());
  } catch (const PreconditionUnmet& e) {
    fail(where, e.what());
  }
}

// Field access on one JSON object with unknown keys rejected up front.
class Obj {
 public:
  Obj(const Json& j, std::string where, std::initializer_list<const char*> keys) : j_(j), where_(std::move(where)) {
    if (!j.is_object()) fail(where_, "expected an object");
    for (const auto& [k, v] : j.items()) {
      bool known = false;
      for (const char* key : keys) known = known || k == key;
      if (!known) fail(where_, "unknown field '" + k + "'");
    }
  }
  const std::string& where() const { return where_; }
  bool has(const char* key) const { return j_.contains(key); }
  const Json& need(const char* key) const {
    if (!j_.contains(key)) fail(where_, std::string("missing field '") + key + "'");
    return j_.at(key);
  }
  const Json* opt(const char* key) const { return j_.contains(key) ? &j_.at(key) : nullptr; }
  std::string sub(const char* key) const { return where_ + "." + key; }

  std::string string(const char* key) const { return as_string(need(key), sub(key)); }
  std::size_t count(const char* key) const { return as_count(need(key), sub(key)); }
  const Json& array(const char* key) const {
    const Json& a = need(key);
    if (!a.is_array()) fail(sub(key), "expected an array");
    return a;
  }

  static std::string as_string(const Json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
  }
  static std::size_t as_count(const Json& j, const std::string& where) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
      fail(where, "expected a nonnegative integer");
    return j.get<std::size_t>();
  }

 private:
  const Json& j_;
  std::string where_;
};

Rational as_rational(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return guarded(where, [&] { return parse_rational(j.get<std::string>()); });
  fail(where, "expected an integer or a rational string such as \"3/2\" or \"1.414\"");
}

std::vector<Rational> as_rationals(const Json& j, const std::string& where) {
  if (!j.is_array()) return {as_rational(j, where)};
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_rational(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Expr as_expr(const Json& j, const std::string& where) {
  const std::string text = Obj::as_string(j, where);
  return guarded(where, [&] { return Expr::parse(text); });
}

// A point given by label or by index.
Point as_point(const FinSpace& s, const Json& j, const std::string& where) {
  if (j.is_string()) {
    auto p = s.find_point(j.get<std::string>());
    if (!p) fail(where, "unknown point '" + j.get<std::string>() + "'");
    return *p;
  }
  const std::size_t i = Obj::as_count(j, where);
  if (i >= s.point_count()) fail(where, "point index " + std::to_string(i) + " out of range");
  return i;
}

PointSet as_set(const FinSpace& s, const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of points");
  PointSet out;
  for (std::size_t i = 0; i < j.size(); ++i) out.insert(as_point(s, j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<Point> as_points(const FinSpace& s, const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of points");
  std::vector<Point> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_point(s, j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::string issues_text(const ValidationReport& r) {
  std::string s;
  for (const auto& i : r.issues) s += (s.empty() ? "" : "; ") + i.kind + ": " + i.detail;
  return s;
}

struct ParsedSpace {
  GradedBase base;
  std::vector<std::size_t> open_order;  // document open index -> canonical index
};

ParsedSpace parse_space(const Json& j, const std::string& where) {
  Obj o(j, where, {"points", "opens", "base"});
  std::vector<std::string> labels;
  std::set<std::string> seen;
  const Json& pts = o.array("points");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    labels.push_back(Obj::as_string(pts[i], o.sub("points") + "[" + std::to_string(i) + "]"));
    if (!seen.insert(labels.back()).second) fail(o.sub("points"), "duplicate point '" + labels.back() + "'");
  }
  if (labels.size() > PointSet::kMaxPoints) fail(o.sub("points"), "more than 64 points");
  FinSpace scratch(labels, {});
  std::vector<PointSet> opens;
  const Json& ops = o.array("opens");
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const std::string w = o.sub("opens") + "[" + std::to_string(i) + "]";
    opens.push_back(as_set(scratch, ops[i], w));
    for (std::size_t k = 0; k < i; ++k)
      if (opens[k] == opens.back()) fail(w, "duplicate open set (same as opens[" + std::to_string(k) + "])");
  }
  auto space = std::make_shared<const FinSpace>(labels, opens);
  if (auto r = validate(*space); !r.ok()) fail(where, issues_text(r));
  ParsedSpace out;
  for (PointSet s : opens) out.open_order.push_back(*space->open_index(s));

  const Json* base = o.opt("base");
  if (!base) {
    out.base = kernel_base(space);
    return out;
  }
  Obj b(*base, o.sub("base"), {"levels"});
  const Json& levels = b.need("levels");
  if (!levels.is_object()) fail(b.sub("levels"), "expected an object of level label -> open indices");
  std::vector<BaseLevel> lv;
  for (const auto& [label, members] : levels.items()) {
    const std::string w = b.sub("levels") + "." + label;
    if (!members.is_array()) fail(w, "expected an array of open indices");
    BaseLevel level{label, {}};
    for (std::size_t i = 0; i < members.size(); ++i) {
      const std::size_t idx = Obj::as_count(members[i], w + "[" + std::to_string(i) + "]");
      if (idx >= opens.size())
        fail(w, "level '" + label + "' references open " + std::to_string(idx) + " but only " +
                    std::to_string(opens.size()) + " opens are listed");
      level.members.push_back(out.open_order[idx]);
    }
    lv.push_back(std::move(level));
  }
  out.base = GradedBase(space, std::move(lv));
  if (auto r = validate(out.base); !r.ok()) fail(o.sub("base"), issues_text(r));
  return out;
}

// Builds a piecewise-linear expression in t, one row per index n; the last
// row repeats.
std::string table_expression(const std::vector<Rational>& pts, const std::vector<std::vector<Rational>>& rows,
                             const std::string& where) {
  if (pts.size() < 2) fail(where, "a function table needs at least two points");
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (!(pts[i - 1] < pts[i])) fail(where, "table points must increase");
  if (rows.empty()) fail(where, "a function table needs at least one row");
  auto paren = [](const Rational& x) { return "(" + format_rational(x) + ")"; };
  std::string expr;
  for (std::size_t n = 0; n < rows.size(); ++n) {
    const auto& v = rows[n];
    if (v.size() != pts.size()) fail(where, "row " + std::to_string(n) + " has the wrong number of values");
    std::vector<Rational> slope;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) slope.push_back((v[i + 1] - v[i]) / (pts[i + 1] - pts[i]));
    std::string row = paren(v[0]) + " + " + paren(slope[0]) + "*(t - " + paren(pts[0]) + ")";
    for (std::size_t i = 1; i < slope.size(); ++i)
      if (slope[i] != slope[i - 1])
        row += " + " + paren(slope[i] - slope[i - 1]) + "*max(0, t - " + paren(pts[i]) + ")";
    const std::string sel = n + 1 == rows.size() ? "(n >= " + std::to_string(n) + ")"
                                                 : "(n >= " + std::to_string(n) + ")*(n <= " + std::to_string(n) + ")";
    expr += (expr.empty() ? "" : " + ") + sel + "*(" + row + ")";
  }
  return expr;
}

Region parse_region(const Json& j, const std::string& where) {
  Obj o(j, where, {"lo", "hi", "lo_open", "hi_open"});
  Region r;
  if (auto* x = o.opt("lo")) r.lo = as_rational(*x, o.sub("lo"));
  if (auto* x = o.opt("hi")) r.hi = as_rational(*x, o.sub("hi"));
  for (auto [key, flag] : {std::pair{"lo_open", &r.lo_open}, std::pair{"hi_open", &r.hi_open}})
    if (auto* x = o.opt(key)) {
      if (!x->is_boolean()) fail(o.sub(key), "expected true or false");
      *flag = x->get<bool>();
    }
  if (!(r.lo < r.hi)) fail(where, "need lo < hi");
  return r;
}

class Loader {
 public:
  Loader(Workspace& ws, std::string origin) : ws_(ws), origin_(std::move(origin)) {}

  void run(const Json& doc) {
    Obj top(doc, origin_,
            {"version", "spaces", "enumerate", "nets", "binets", "maps", "ustructures", "uniformities", "sequences",
             "functions", "products", "integrals"});
    const Json& v = top.need("version");
    if (!v.is_number_integer() || v.get<long>() != 1) fail(top.sub("version"), "only version 1 is supported");
    section(top, "spaces", [&](const std::string& n, const Json& j, const std::string& w) {
      ws_.spaces.emplace(n, parse_space(j, w).base);
    });
    if (auto* e = top.opt("enumerate")) enumerate(*e, top.sub("enumerate"));
    section(top, "nets", [&](const std::string& n, const Json& j, const std::string& w) { net(n, j, w); });
    section(top, "binets", [&](const std::string& n, const Json& j, const std::string& w) { binet(n, j, w); });
    section(top, "maps", [&](const std::string& n, const Json& j, const std::string& w) { map(n, j, w); });
    section(top, "uniformities", [&](const std::string& n, const Json& j, const std::string& w) {
      ws_.uniformities.emplace(n, uniformity(j, w));
    });
    section(top, "ustructures", [&](const std::string& n, const Json& j, const std::string& w) {
      ws_.ustructures.emplace(n, ustructure(j, w));
    });
    section(top, "sequences", [&](const std::string& n, const Json& j, const std::string& w) {
      ws_.sequences.emplace(n, SequenceDoc{j, CompletionPoint{sequence(j, w)}});
    });
    section(top, "functions", [&](const std::string& n, const Json& j, const std::string& w) {
      ws_.functions.emplace(n, function(n, j, w));
    });
    section(top, "products", [&](const std::string& n, const Json& j, const std::string& w) {
      ws_.products.emplace(n, product(j, w));
    });
    section(top, "integrals", [&](const std::string& n, const Json& j, const std::string& w) {
      ws_.integrals.emplace(n, integral(j, w));
    });
  }

 private:
  template <typename F>
  void section(const Obj& top, const char* key, F&& f) {
    const Json* s = top.opt(key);
    if (!s) return;
    if (!s->is_object()) fail(top.sub(key), "expected an object of name -> definition");
    for (const auto& [name, j] : s->items()) {
      const std::string w = top.sub(key) + "." + name;
      claim(name, w);
      f(name, j, w);
    }
  }

  void claim(const std::string& name, const std::string& where) {
    if (name.empty()) fail(where, "empty object name");
    if (ws_.contains(name)) fail(where, "duplicate object name '" + name + "'");
  }

  const GradedBase& space_ref(const Json& j, const std::string& where) {
    const std::string name = Obj::as_string(j, where);
    auto it = ws_.spaces.find(name);
    if (it == ws_.spaces.end()) fail(where, "unknown space '" + name + "'");
    return it->second;
  }

  // A space by name or inline; open indices of inline spaces follow their
  // listed order, those of named spaces the canonical order.
  ParsedSpace space_or_inline(const Json& j, const std::string& where) {
    if (j.is_object()) return parse_space(j, where);
    ParsedSpace p{space_ref(j, where), {}};
    for (std::size_t i = 0; i < p.base.space().opens().size(); ++i) p.open_order.push_back(i);
    return p;
  }

  void enumerate(const Json& j, const std::string& where) {
    Obj o(j, where, {"points", "base", "prefix"});
    const std::size_t n = o.count("points");
    if (n > 4) fail(o.sub("points"), "enumeration is limited to 4 points");
    const std::string base = o.has("base") ? o.string("base") : "kernel";
    if (base != "kernel" && base != "open") fail(o.sub("base"), "expected \"kernel\" or \"open\"");
    const std::string prefix = o.has("prefix") ? o.string("prefix") : "t" + std::to_string(n) + "_";
    const auto all = enumerate_topologies(n);
    const std::size_t width = std::to_string(all.size() - 1).size();
    for (std::size_t i = 0; i < all.size(); ++i) {
      std::string idx = std::to_string(i);
      idx.insert(0, width - idx.size(), '0');
      claim(prefix + idx, where);
      auto s = std::make_shared<const FinSpace>(all[i]);
      ws_.spaces.emplace(prefix + idx, base == "kernel" ? kernel_base(s) : open_base(s));
    }
  }

  void net(const std::string& name, const Json& j, const std::string& where) {
    Obj o(j, where, {"space", "prefix", "cycle"});
    const GradedBase& b = space_ref(o.need("space"), o.sub("space"));
    LassoNet u;
    if (auto* p = o.opt("prefix")) u.prefix = as_points(b.space(), *p, o.sub("prefix"));
    u.cycle = as_points(b.space(), o.need("cycle"), o.sub("cycle"));
    guarded(where, [&] { check_net(u, b.space().point_count()); });
    ws_.nets.emplace(name, NetDoc{o.string("space"), std::move(u)});
  }

  void binet(const std::string& name, const Json& j, const std::string& where) {
    Obj o(j, where, {"space", "row_prefix", "col_prefix", "table"});
    const GradedBase& b = space_ref(o.need("space"), o.sub("space"));
    LassoBiNet u;
    if (o.has("row_prefix")) u.row_prefix = o.count("row_prefix");
    if (o.has("col_prefix")) u.col_prefix = o.count("col_prefix");
    const Json& t = o.array("table");
    for (std::size_t i = 0; i < t.size(); ++i)
      u.table.push_back(as_points(b.space(), t[i], o.sub("table") + "[" + std::to_string(i) + "]"));
    guarded(where, [&] { check_binet(u, b.space().point_count()); });
    ws_.binets.emplace(name, BiNetDoc{o.string("space"), std::move(u)});
  }

  void map(const std::string& name, const Json& j, const std::string& where) {
    Obj o(j, where, {"source", "target", "table"});
    const GradedBase& s = space_ref(o.need("source"), o.sub("source"));
    const GradedBase& t = space_ref(o.need("target"), o.sub("target"));
    SpaceMap f{s.space_ref(), t.space_ref(), as_points(t.space(), o.need("table"), o.sub("table"))};
    guarded(where, [&] { check_map(f); });
    ws_.maps.emplace(name, MapDoc{o.string("source"), o.string("target"), std::move(f)});
  }

  UStructureFin ustructure(const Json& j, const std::string& where) {
    if (j.is_object() && j.contains("preset")) {
      Obj o(j, where, {"preset", "n", "divisors", "carrier", "uniformity"});
      const std::string preset = o.string("preset");
      if (preset == "cyclic-difference") {
        std::vector<std::size_t> divisors;
        const Json& d = o.array("divisors");
        for (std::size_t i = 0; i < d.size(); ++i) divisors.push_back(Obj::as_count(d[i], o.sub("divisors")));
        const std::size_t n = o.count("n");
        return guarded(where, [&] { return cyclic_difference(n, divisors); });
      }
      if (preset == "equality") return equality_indicator(space_ref(o.need("carrier"), o.sub("carrier")).space_ref());
      if (preset == "from-uniformity") {
        const std::string u = o.string("uniformity");
        auto it = ws_.uniformities.find(u);
        if (it == ws_.uniformities.end()) fail(o.sub("uniformity"), "unknown uniformity '" + u + "'");
        return ustructure_from_uniformity(it->second);
      }
      fail(o.sub("preset"), "unknown preset '" + preset + "' (cyclic-difference, equality, from-uniformity)");
    }
    Obj o(j, where, {"carrier", "aux", "table", "radii"});
    const ParsedSpace carrier = space_or_inline(o.need("carrier"), o.sub("carrier"));
    const ParsedSpace aux = space_or_inline(o.need("aux"), o.sub("aux"));
    UStructureFin s;
    s.carrier = carrier.base.space_ref();
    s.aux = aux.base.space_ref();
    const Json& t = o.array("table");
    for (std::size_t i = 0; i < t.size(); ++i)
      s.table.push_back(as_points(*s.aux, t[i], o.sub("table") + "[" + std::to_string(i) + "]"));
    const Json& r = o.array("radii");
    for (std::size_t i = 0; i < r.size(); ++i) {
      const std::string w = o.sub("radii") + "[" + std::to_string(i) + "]";
      if (!r[i].is_array()) fail(w, "expected an array of aux open indices");
      PointSet radius;
      for (const auto& x : r[i]) {
        const std::size_t idx = Obj::as_count(x, w);
        if (idx >= aux.open_order.size()) fail(w, "aux open index " + std::to_string(idx) + " out of range");
        radius |= s.aux->opens()[aux.open_order[idx]];
      }
      s.radii.push_back(radius);
    }
    guarded(where, [&] { check_ustructure(s); });
    return s;
  }

  UniformityFin uniformity(const Json& j, const std::string& where) {
    Obj o(j, where, {"points", "entourages"});
    std::vector<std::string> labels;
    for (const auto& p : o.array("points")) labels.push_back(Obj::as_string(p, o.sub("points")));
    const std::size_t n = labels.size();
    FinSpace scratch(labels, {});
    std::vector<Relation> ents;
    const Json& e = o.array("entourages");
    for (std::size_t k = 0; k < e.size(); ++k) {
      const std::string w = o.sub("entourages") + "[" + std::to_string(k) + "]";
      if (!e[k].is_array() || e[k].size() != n) fail(w, "expected an " + std::to_string(n) + "x" + std::to_string(n) + " 0/1 matrix");
      Relation r{std::vector<PointSet>(n)};
      for (std::size_t x = 0; x < n; ++x) {
        if (!e[k][x].is_array() || e[k][x].size() != n) fail(w, "row " + std::to_string(x) + " has the wrong length");
        for (std::size_t y = 0; y < n; ++y) {
          const Json& c = e[k][x][y];
          if (!c.is_number_integer() || (c.get<int>() != 0 && c.get<int>() != 1)) fail(w, "entries must be 0 or 1");
          if (c.get<int>() == 1) r.rows[x].insert(y);
        }
      }
      ents.push_back(std::move(r));
    }
    UniformityFin u;
    u.carrier = std::make_shared<const FinSpace>(uniform_topology(labels, ents));
    u.entourages = std::move(ents);
    guarded(where, [&] { check_uniformity(u); });
    return u;
  }

  ModulusCauchySeq sequence(const Json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("kind")) fail(where, "expected an object with a \"kind\"");
    const std::string kind = Obj::as_string(j.at("kind"), where + ".kind");
    if (kind == "decimal-truncation" || kind == "continued-fraction") {
      Obj o(j, where, {"kind", "target"});
      if (o.string("target") != "sqrt2") fail(o.sub("target"), "only \"sqrt2\" is built in");
      return kind == "decimal-truncation" ? sqrt2_decimal() : sqrt2_continued_fraction();
    }
    if (kind == "table") {
      Obj o(j, where, {"kind", "values", "modulus"});
      auto values = as_rationals(o.array("values"), o.sub("values"));
      std::vector<std::size_t> modulus;
      for (const auto& m : o.array("modulus")) modulus.push_back(Obj::as_count(m, o.sub("modulus")));
      return guarded(where, [&] { return table_sequence(std::move(values), std::move(modulus)); });
    }
    if (kind == "expression") {
      Obj o(j, where, {"kind", "term", "modulus"});
      return expression_sequence(as_expr(o.need("term"), o.sub("term")), as_expr(o.need("modulus"), o.sub("modulus")));
    }
    if (kind == "point") {
      Obj o(j, where, {"kind", "value"});
      return embed(as_rational(o.need("value"), o.sub("value"))).rep;
    }
    fail(where + ".kind", "unknown sequence kind '" + kind + "' (decimal-truncation, continued-fraction, table, expression, point)");
  }

  FunctionDoc function(const std::string& name, const Json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("kind")) fail(where, "expected an object with a \"kind\"");
    const std::string kind = Obj::as_string(j.at("kind"), where + ".kind");
    FunctionDoc f;
    f.descriptor = j;
    std::string term;
    const Obj* op = nullptr;
    std::optional<Obj> o;
    if (kind == "expression") {
      o.emplace(j, where, std::initializer_list<const char*>{"kind", "term", "modulus", "limit", "region"});
      term = o->string("term");
    } else if (kind == "table") {
      o.emplace(j, where, std::initializer_list<const char*>{"kind", "points", "values", "modulus", "limit", "region"});
      const auto pts = as_rationals(o->array("points"), o->sub("points"));
      std::vector<std::vector<Rational>> rows;
      const Json& v = o->array("values");
      for (std::size_t i = 0; i < v.size(); ++i)
        rows.push_back(as_rationals(v[i], o->sub("values") + "[" + std::to_string(i) + "]"));
      term = table_expression(pts, rows, o->sub("values"));
    } else {
      fail(where + ".kind", "unknown function kind '" + kind + "' (expression, table)");
    }
    op = &*o;
    f.seq.term = guarded(op->sub("term"), [&] { return Expr::parse(term); });
    f.seq.name = name;
    if (auto* m = op->opt("modulus")) f.seq.modulus = as_expr(*m, op->sub("modulus"));
    if (auto* l = op->opt("limit")) f.limit = as_expr(*l, op->sub("limit"));
    if (auto* r = op->opt("region")) f.region = parse_region(*r, op->sub("region"));
    return f;
  }

  ProductDoc product(const Json& j, const std::string& where) {
    Obj o(j, where, {"factors", "power", "index", "z"});
    ProductDoc p;
    if (o.has("factors") == o.has("power")) fail(where, "give exactly one of \"factors\" and \"power\"");
    std::vector<std::string> index;
    if (auto* ix = o.opt("index"))
      for (const auto& l : *ix) index.push_back(Obj::as_string(l, o.sub("index")));
    if (o.has("factors")) {
      for (const auto& f : o.array("factors")) p.factors.push_back(Obj::as_string(f, o.sub("factors")));
    } else {
      if (index.empty()) fail(o.sub("index"), "a power needs index labels");
      p.factors.assign(index.size(), o.string("power"));
    }
    if (index.empty())
      for (std::size_t i = 0; i < p.factors.size(); ++i) index.push_back("y" + std::to_string(i));
    if (index.size() != p.factors.size()) fail(o.sub("index"), "one index label per factor");
    p.spec.index_labels = index;
    for (const auto& f : p.factors) p.spec.factors.push_back(space_ref(Json(f), o.sub("factors")));
    guarded(where, [&] { check_product_spec(p.spec); });
    p.z_descriptor = o.has("z") ? o.need("z") : Json("singletons");
    p.z = zfamily(p.z_descriptor, index, o.sub("z"));
    return p;
  }

  ZFamily zfamily(const Json& j, const std::vector<std::string>& index, const std::string& where) {
    if (j.is_string()) {
      const std::string k = j.get<std::string>();
      if (k == "singletons") return ZFamily::singletons();
      if (k == "whole") return ZFamily::whole();
      if (k == "compacts") return ZFamily::compacts();
      fail(where, "unknown family '" + k + "' (singletons, whole, compacts, {explicit}, {completes})");
    }
    Obj o(j, where, {"explicit", "completes"});
    if (o.has("explicit") == o.has("completes")) fail(where, "give exactly one of \"explicit\" and \"completes\"");
    FinSpace ix(index, {});
    if (o.has("explicit")) {
      std::vector<PointSet> members;
      for (const auto& m : o.array("explicit")) members.push_back(as_set(ix, m, o.sub("explicit")));
      return ZFamily::explicit_list(std::move(members));
    }
    const GradedBase& d = space_ref(o.need("completes"), o.sub("completes"));
    if (d.space().labels() != index) fail(o.sub("completes"), "the domain's points must be the index labels");
    return ZFamily::completes(d);
  }

  IntegralDoc integral(const Json& j, const std::string& where) {
    Obj o(j, where, {"universe", "module", "measure", "integrand", "depth", "tags", "tol"});
    IntegralDoc d;
    d.descriptor = j;
    d.module = o.has("module") ? guarded(o.sub("module"), [&] { return ModuleSpec::parse(o.string("module")); })
                               : ModuleSpec::real();
    Obj u(o.need("universe"), o.sub("universe"), {"interval", "breakpoints", "labels"});
    if (u.has("labels") == u.has("interval")) fail(u.where(), "give exactly one of \"interval\" and \"labels\"");
    if (u.has("labels")) {
      std::vector<std::string> labels;
      for (const auto& l : u.array("labels")) labels.push_back(Obj::as_string(l, u.sub("labels")));
      d.algebra = guarded(u.where(), [&] { return AtomAlgebra::finite(labels); });
    } else {
      auto ab = as_rationals(u.array("interval"), u.sub("interval"));
      if (ab.size() != 2) fail(u.sub("interval"), "expected [a, b]");
      std::vector<Rational> breaks;
      if (auto* b = u.opt("breakpoints")) breaks = as_rationals(*b, u.sub("breakpoints"));
      d.algebra = guarded(u.where(), [&] { return AtomAlgebra::interval(ab[0], ab[1], breaks); });
    }
    d.measure = measure(o.need("measure"), o.sub("measure"), d);
    d.integrand = integrand(o.need("integrand"), o.sub("integrand"), d);
    if (o.has("depth")) d.options.depth = o.count("depth");
    if (d.options.depth > 24) fail(o.sub("depth"), "depth is limited to 24");
    if (o.has("tags")) d.options.tags = guarded(o.sub("tags"), [&] { return parse_tag_rule(o.string("tags")); });
    if (auto* t = o.opt("tol")) d.options.tol = as_rational(*t, o.sub("tol"));
    return d;
  }

  Element element(const Json& j, const std::string& where, const ModuleSpec& mod) {
    return guarded(where, [&] { return mod.normalize(as_rationals(j, where)); });
  }

  VectorMeasure measure(const Json& j, const std::string& where, const IntegralDoc& d) {
    const std::string kind = j.is_string() ? j.get<std::string>()
                             : j.is_object() && j.contains("kind") ? Obj::as_string(j.at("kind"), where + ".kind")
                                                                   : "";
    if (kind == "length" || kind == "zero") {
      if (d.algebra.is_finite() && kind == "length") fail(where, "length needs an interval universe");
      if (kind == "zero") return zero_measure(d.module);
      Element unit;
      if (j.is_object()) {
        Obj o(j, where, {"kind", "unit"});
        if (auto* un = o.opt("unit")) unit = element(*un, o.sub("unit"), d.module);
      }
      return guarded(where, [&] { return length_measure(d.module, unit); });
    }
    if (kind == "table") {
      Obj o(j, where, {"kind", "values"});
      if (!d.algebra.is_finite()) fail(where, "a table measure needs a finite universe");
      const Json& v = o.array("values");
      if (v.size() != d.algebra.labels().size()) fail(o.sub("values"), "one value per label");
      std::vector<Element> values;
      for (std::size_t i = 0; i < v.size(); ++i)
        values.push_back(element(v[i], o.sub("values") + "[" + std::to_string(i) + "]", d.module));
      return table_measure(d.module, std::move(values));
    }
    fail(where, "expected \"length\", \"zero\" or {\"kind\": \"table\", \"values\": [...]}");
  }

  Integrand integrand(const Json& j, const std::string& where, const IntegralDoc& d) {
    Integrand f;
    if (j.is_string()) {
      if (d.module.scalar_components() != 1) fail(where, "complex integrands need {\"re\", \"im\"}");
      f = guarded(where, [&] { return Integrand::expression(j.get<std::string>()); });
    } else if (j.is_object() && j.contains("table")) {
      Obj o(j, where, {"table"});
      if (!d.algebra.is_finite()) fail(where, "a table integrand needs a finite universe");
      const Json& t = o.array("table");
      if (t.size() != d.algebra.labels().size()) fail(o.sub("table"), "one value per label");
      std::vector<Scalar> values;
      for (std::size_t i = 0; i < t.size(); ++i) {
        const std::string w = o.sub("table") + "[" + std::to_string(i) + "]";
        values.push_back(guarded(w, [&] { return d.module.normalize_scalar(as_rationals(t[i], w)); }));
      }
      f = Integrand::of_table(std::move(values));
    } else {
      Obj o(j, where, {"re", "im"});
      if (d.module.kind != ModuleSpec::Kind::Complex) fail(where, "{\"re\", \"im\"} integrands need a complex module");
      f = guarded(where, [&] { return Integrand::complex_expression(o.string("re"), o.string("im")); });
    }
    if (!f.parts.empty() && d.algebra.is_finite()) fail(where, "finite universes take table integrands");
    return f;
  }

  Workspace& ws_;
  std::string origin_;
};

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line, col = 1;
    else ++col;
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

// Parses JSON rejecting duplicate keys inside any object.
Json parse_strict(const std::string& text, const std::string& origin) {
  std::vector<std::set<std::string>> keys;
  std::optional<std::string> duplicate;
  auto cb = [&](int, Json::parse_event_t ev, Json& parsed) {
    if (ev == Json::parse_event_t::object_start) keys.emplace_back();
    else if (ev == Json::parse_event_t::object_end && !keys.empty()) keys.pop_back();
    else if (ev == Json::parse_event_t::key && !keys.empty() && !keys.back().insert(parsed.get<std::string>()).second &&
             !duplicate)
      duplicate = parsed.get<std::string>();
    return true;
  };
  try {
    Json j = Json::parse(text, cb);
    if (duplicate) fail(origin, "duplicate key '" + *duplicate + "'");
    return j;
  } catch (const Json::parse_error& e) {
    std::string what = e.what();
    if (auto p = what.find("syntax error"); p != std::string::npos) what = what.substr(p);
    fail(origin, "parse error at " + line_col(text, e.byte) + ": " + what);
  }
}

}  // namespace

bool Workspace::contains(const std::string& n) const {
  return spaces.contains(n) || nets.contains(n) || binets.contains(n) || maps.contains(n) || ustructures.contains(n) ||
         uniformities.contains(n) || sequences.contains(n) || functions.contains(n) || products.contains(n) ||
         integrals.contains(n);
}

std::size_t Workspace::size() const {
  return spaces.size() + nets.size() + binets.size() + maps.size() + ustructures.size() + uniformities.size() +
         sequences.size() + functions.size() + products.size() + integrals.size();
}

const GradedBase& Workspace::space(const std::string& name) const {
  auto it = spaces.find(name);
  if (it == spaces.end()) throw InputError("no space named '" + name + "'");
  return it->second;
}

const NetDoc& Workspace::net(const std::string& name) const {
  auto it = nets.find(name);
  if (it == nets.end()) throw InputError("no net named '" + name + "'");
  return it->second;
}

void load_document(Workspace& ws, const std::string& text, const std::string& origin) {
  const Json doc = parse_strict(text, origin);
  Workspace next = ws;
  Loader(next, origin).run(doc);
  ws = std::move(next);
}

Workspace load_files(const std::vector<std::string>& paths) {
  Workspace ws;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot read file");
    std::stringstream ss;
    ss << in.rdbuf();
    load_document(ws, ss.str(), path);
  }
  return ws;
}

Json rational_json(const Rational& x) {
  if (x.get_den() == 1 && x.get_num().fits_slong_p()) return Json(x.get_num().get_si());
  return Json(format_rational(x));
}

Json set_json(const FinSpace& space, PointSet s) {
  Json a = Json::array();
  s.for_each([&](Point p) { a.push_back(space.label(p)); });
  return a;
}

Json net_json(const FinSpace& space, const LassoNet& u) {
  Json prefix = Json::array(), cycle = Json::array();
  for (Point p : u.prefix) prefix.push_back(space.label(p));
  for (Point p : u.cycle) cycle.push_back(space.label(p));
  return Json{{"prefix", prefix}, {"cycle", cycle}};
}

namespace {

Json opens_json(const FinSpace& s) {
  Json opens = Json::array();
  for (PointSet o : s.opens()) {
    Json idx = Json::array();
    o.for_each([&](Point p) { idx.push_back(p); });
    opens.push_back(idx);
  }
  return opens;
}

Json bare_space_json(const FinSpace& s) { return Json{{"points", s.labels()}, {"opens", opens_json(s)}}; }

Json space_ref_json(const Workspace& ws, const SpaceRef& s) {
  for (const auto& [name, b] : ws.spaces)
    if (b.space_ref() == s) return name;
  return bare_space_json(*s);
}

}  // namespace

Json space_json(const GradedBase& base) {
  Json j = bare_space_json(base.space());
  Json levels = Json::object();
  for (const auto& l : base.levels()) levels[l.label] = l.members;
  j["base"] = Json{{"levels", levels}};
  return j;
}

Json serialize(const Workspace& ws) {
  Json doc{{"version", 1}};
  auto put = [&](const char* key, const std::string& name, Json v) { doc[key][name] = std::move(v); };
  for (const auto& [n, b] : ws.spaces) put("spaces", n, space_json(b));
  for (const auto& [n, u] : ws.nets) {
    Json j{{"space", u.space}};
    j.update(net_json(ws.space(u.space).space(), u.net));
    put("nets", n, j);
  }
  for (const auto& [n, u] : ws.binets) {
    const FinSpace& s = ws.space(u.space).space();
    Json table = Json::array();
    for (const auto& row : u.net.table) {
      Json r = Json::array();
      for (Point p : row) r.push_back(s.label(p));
      table.push_back(r);
    }
    put("binets", n,
        Json{{"space", u.space}, {"row_prefix", u.net.row_prefix}, {"col_prefix", u.net.col_prefix}, {"table", table}});
  }
  for (const auto& [n, m] : ws.maps) {
    Json table = Json::array();
    for (Point p : m.map.table) table.push_back(m.map.target->label(p));
    put("maps", n, Json{{"source", m.source}, {"target", m.target}, {"table", table}});
  }
  for (const auto& [n, s] : ws.ustructures) {
    Json table = Json::array();
    for (const auto& row : s.table) {
      Json r = Json::array();
      for (Point z : row) r.push_back(s.aux->label(z));
      table.push_back(r);
    }
    Json radii = Json::array();
    for (PointSet r : s.radii) radii.push_back(Json::array({*s.aux->open_index(r)}));
    put("ustructures", n,
        Json{{"carrier", space_ref_json(ws, s.carrier)}, {"aux", space_ref_json(ws, s.aux)}, {"table", table},
             {"radii", radii}});
  }
  for (const auto& [n, u] : ws.uniformities) {
    Json ents = Json::array();
    const std::size_t k = u.carrier->point_count();
    for (const auto& r : u.entourages) {
      Json m = Json::array();
      for (std::size_t x = 0; x < k; ++x) {
        Json row = Json::array();
        for (std::size_t y = 0; y < k; ++y) row.push_back(r.contains(x, y) ? 1 : 0);
        m.push_back(row);
      }
      ents.push_back(m);
    }
    put("uniformities", n, Json{{"points", u.carrier->labels()}, {"entourages", ents}});
  }
  for (const auto& [n, s] : ws.sequences) put("sequences", n, s.descriptor);
  for (const auto& [n, f] : ws.functions) put("functions", n, f.descriptor);
  for (const auto& [n, p] : ws.products) {
    Json j{{"factors", p.factors}, {"index", p.spec.index_labels}, {"z", p.z_descriptor}};
    put("products", n, j);
  }
  for (const auto& [n, i] : ws.integrals) put("integrals", n, i.descriptor);
  return doc;
}

}  // namespace basespace
