#include "basespace/report.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace basespace {

int exit_code(Status s) {
  switch (s) {
    case Status::Holds: return kExitHolds;
    case Status::Fails: return kExitFails;
    case Status::PreconditionUnmet: return kExitPrecondition;
    case Status::Unknown: return kExitUndecided;
  }
  return kExitInput;
}

int worst_exit(int a, int b) {
  auto rank = [](int e) {
    switch (e) {
      case kExitInput: return 4;
      case kExitFails: return 3;
      case kExitPrecondition: return 2;
      case kExitUndecided: return 1;
      default: return 0;
    }
  };
  return rank(a) >= rank(b) ? a : b;
}

const std::vector<std::string>& verbs() {
  static const std::vector<std::string> v{"validate", "classify", "approach",  "cauchy",   "limits",
                                          "suite",    "uspace",   "complete",  "funcspace", "integrate"};
  return v;
}

namespace {

// Accumulates text lines, the JSON body and the exit code of one run.
struct Out {
  Report r;
  std::ostringstream text;

  void line(const std::string& s) { text << s << '\n'; }
  void status(Status s) { r.exit = worst_exit(r.exit, exit_code(s)); }
  void code(int e) { r.exit = worst_exit(r.exit, e); }
  Report done() {
    r.text = text.str();
    return std::move(r);
  }
};

template <typename M>
std::vector<std::string> pick(const M& objects, const std::vector<std::string>& names, const char* kind) {
  std::vector<std::string> out;
  if (names.empty()) {
    for (const auto& [n, _] : objects) out.push_back(n);
    if (out.empty()) throw InputError(std::string("the workspace has no ") + kind);
    return out;
  }
  for (const auto& n : names) {
    if (!objects.contains(n)) throw InputError(std::string("no ") + kind + " named '" + n + "'");
    out.push_back(n);
  }
  return out;
}

template <typename M>
const typename M::mapped_type& one(const M& objects, const std::vector<std::string>& names, std::size_t i,
                                   const char* kind) {
  if (names.size() <= i) {
    if (i == 0 && objects.size() == 1) return objects.begin()->second;
    throw InputError(std::string("expected a ") + kind + " name as argument " + std::to_string(i + 1));
  }
  auto it = objects.find(names[i]);
  if (it == objects.end()) throw InputError(std::string("no ") + kind + " named '" + names[i] + "'");
  return it->second;
}

std::string name_at(const std::vector<std::string>& names, std::size_t i, const std::string& fallback) {
  return i < names.size() ? names[i] : fallback;
}

std::size_t need_depth(const RunOptions& opt, const char* what) {
  if (!opt.depth) throw InputError(std::string(what) + " needs --depth");
  return *opt.depth;
}

Json witness_json(const GradedBase& base, const Witness& w) {
  const FinSpace& s = base.space();
  return Json{{"level", w.level},
              {"recurrent", s.label(w.recurrent)},
              {"member", set_json(s, s.opens().at(w.member))},
              {"excluded", s.label(w.excluded)}};
}

Json verdict_json(const GradedBase& base, const Verdict& v) {
  Json j{{"status", to_string(v.status)}, {"method", to_string(v.method)}};
  if (v.witness) j["witness"] = witness_json(base, *v.witness);
  if (!v.nets.empty()) {
    Json nets = Json::array();
    for (const auto& u : v.nets) nets.push_back(net_json(base.space(), u));
    j["nets"] = nets;
  }
  if (!v.detail.empty()) j["detail"] = v.detail;
  return j;
}

std::string verdict_text(const GradedBase& base, const Verdict& v) {
  std::string s = to_string(v.status);
  if (v.witness) s += ", witness " + format_witness(base, *v.witness);
  if (!v.nets.empty()) {
    s += ", nets";
    for (const auto& u : v.nets) s += " " + format_net(base.space(), u);
  }
  if (!v.detail.empty()) s += " (" + v.detail + ")";
  return s;
}

Json double_json(const Rational& x) { return Json(x.get_d()); }

// ---- finite spaces and nets

Report validate_verb(const Workspace& ws, const RunOptions& opt) {
  Out o;
  Json objects = Json::array();
  auto add = [&](const std::string& kind, const std::string& name) {
    if (!opt.names.empty() && std::find(opt.names.begin(), opt.names.end(), name) == opt.names.end()) return;
    objects.push_back(Json{{"name", name}, {"kind", kind}, {"valid", true}});
    o.line(kind + " " + name + ": valid");
  };
  for (const auto& [n, b] : ws.spaces) {
    add("space", n);
    if (!validate(b).ok()) throw std::logic_error("loaded space " + n + " does not validate");
  }
  for (const auto& [n, _] : ws.nets) add("net", n);
  for (const auto& [n, _] : ws.binets) add("binet", n);
  for (const auto& [n, _] : ws.maps) add("map", n);
  for (const auto& [n, _] : ws.ustructures) add("ustructure", n);
  for (const auto& [n, _] : ws.uniformities) add("uniformity", n);
  for (const auto& [n, _] : ws.sequences) add("sequence", n);
  for (const auto& [n, _] : ws.functions) add("function", n);
  for (const auto& [n, _] : ws.products) add("product", n);
  for (const auto& [n, _] : ws.integrals) add("integral", n);
  for (const auto& n : opt.names)
    if (!ws.contains(n)) throw InputError("no object named '" + n + "'");
  o.r.json = Json{{"verb", "validate"}, {"objects", objects}};
  return o.done();
}

Report classify_verb(const Workspace& ws, const RunOptions& opt) {
  Out o;
  Json spaces = Json::array();
  for (const auto& name : pick(ws.spaces, opt.names, "space")) {
    const GradedBase& b = ws.spaces.at(name);
    const Classification c = classify_base(b);
    o.line("space " + name);
    Json j{{"space", name}};
    for (auto [key, v] : {std::pair{"lsb", &c.lsb}, std::pair{"csb", &c.csb}, std::pair{"sb", &c.sb}}) {
      o.line(std::string("  ") + key + ": " + verdict_text(b, *v));
      j[key] = verdict_json(b, *v);
      o.status(v->status);
    }
    // Reported for context; they do not affect the exit code.
    if (b.space().point_count() <= 16) {
      const Verdict comp = is_complete(b), pre = is_precompact(b);
      j["complete"] = verdict_json(b, comp);
      j["precompact"] = verdict_json(b, pre);
      o.line("  complete: " + verdict_text(b, comp));
      o.line("  precompact: " + verdict_text(b, pre));
    }
    if (c.csb.holds()) {
      const CauchyStructure cs = cauchy_structure(b, 4, opt.seed);
      std::size_t cauchy = 0;
      for (bool x : cs.cauchy) cauchy += x;
      j["cauchy_filters"] = Json{{"filters", cs.filters.size()}, {"cauchy", cauchy}, {"violations", cs.violations}};
      o.line("  cauchy filters: " + std::to_string(cauchy) + " of " + std::to_string(cs.filters.size()) +
             " principal filters, " + std::to_string(cs.violations.size()) + " structure violations");
      if (!cs.violations.empty()) o.code(kExitFails);
    }
    spaces.push_back(j);
  }
  o.r.json = Json{{"verb", "classify"}, {"spaces", spaces}};
  return o.done();
}

Report approach_verb(const Workspace& ws, const RunOptions& opt) {
  Out o;
  const NetDoc& u = one(ws.nets, opt.names, 0, "net");
  const NetDoc& v = one(ws.nets, opt.names, 1, "net");
  if (u.space != v.space) throw InputError("nets live on different spaces (" + u.space + ", " + v.space + ")");
  const GradedBase& b = ws.space(u.space);
  const Verdict r = approaches(u.net, v.net, b);
  Json j{{"verb", "approach"}, {"space", u.space}, {"u", net_json(b.space(), u.net)}, {"v", net_json(b.space(), v.net)}};
  j["verdict"] = verdict_json(b, r);
  if (r.witness) j["verdict"]["replayed"] = replay_witness(u.net, v.net, b, *r.witness);
  o.line(format_net(b.space(), u.net) + " approaches " + format_net(b.space(), v.net) + ": " + verdict_text(b, r));
  o.status(r.status);
  o.r.json = j;
  return o.done();
}

Report cauchy_verb(const Workspace& ws, const RunOptions& opt) {
  Out o;
  Json nets = Json::array();
  for (const auto& name : pick(ws.nets, opt.names, "net")) {
    const NetDoc& u = ws.nets.at(name);
    const GradedBase& b = ws.space(u.space);
    const Verdict r = is_cauchy(u.net, b);
    Json j{{"net", name}, {"space", u.space}, {"verdict", verdict_json(b, r)}};
    if (r.witness) j["verdict"]["replayed"] = replay_witness(u.net, u.net, b, *r.witness);
    nets.push_back(j);
    o.line("net " + name + " " + format_net(b.space(), u.net) + " cauchy: " + verdict_text(b, r));
    o.status(r.status);
  }
  o.r.json = Json{{"verb", "cauchy"}, {"nets", nets}};
  return o.done();
}

Report limits_verb(const Workspace& ws, const RunOptions& opt) {
  Out o;
  Json nets = Json::array();
  for (const auto& name : pick(ws.nets, opt.names, "net")) {
    const NetDoc& u = ws.nets.at(name);
    const GradedBase& b = ws.space(u.space);
    const PointSet lim = limits(u.net, b);
    Json j{{"net", name}, {"space", u.space}, {"limits", set_json(b.space(), lim)}};
    Json non = Json::array();
    for (Point x = 0; x < b.space().point_count(); ++x)
      if (!lim.contains(x)) {
        const Verdict r = converges(u.net, x, b);
        Json e{{"point", b.space().label(x)}, {"verdict", verdict_json(b, r)}};
        non.push_back(e);
      }
    j["non_limits"] = non;
    nets.push_back(j);
    o.line("net " + name + " " + format_net(b.space(), u.net) + " limits: " + format_set(b.space(), lim));
  }
  o.r.json = Json{{"verb", "limits"}, {"nets", nets}};
  return o.done();
}

Report suite_verb(const Workspace& ws, const RunOptions& opt) {
  Out o;
  SuiteBounds bounds;
  bounds.max_cycle = opt.max_cycle;
  bounds.max_prefix = opt.max_prefix;
  bounds.budget = opt.budget;
  Json spaces = Json::array();
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> totals;
  std::vector<std::string> order;
  bool partial = false;
  for (const auto& name : pick(ws.spaces, opt.names, "space")) {
    const SuiteReport rep = run_axiom_suite(ws.spaces.at(name), bounds);
    Json axioms = Json::array();
    for (const auto& a : rep.axioms) {
      axioms.push_back(
          Json{{"name", a.name}, {"cases", a.cases}, {"counterexamples", a.counterexamples}, {"examples", a.examples}});
      if (!totals.contains(a.name)) order.push_back(a.name);
      totals[a.name].first += a.cases;
      totals[a.name].second += a.counterexamples;
      if (a.counterexamples) o.line("space " + name + " " + a.name + ": " + a.examples.front());
    }
    partial = partial || rep.partial;
    spaces.push_back(Json{{"space", name}, {"nets", rep.nets}, {"partial", rep.partial}, {"axioms", axioms}});
  }
  Json summary = Json::array();
  for (const auto& n : order) {
    summary.push_back(Json{{"name", n}, {"cases", totals[n].first}, {"counterexamples", totals[n].second}});
    o.line(n + ": " + std::to_string(totals[n].first) + " cases, " + std::to_string(totals[n].second) +
           " counterexamples");
    if (totals[n].second) o.code(kExitFails);
  }
  if (partial) {
    o.line("budget exhausted: counts are partial");
    o.code(kExitUndecided);
  }
  o.r.json = Json{{"verb", "suite"},
                  {"bounds", Json{{"max_prefix", bounds.max_prefix}, {"max_cycle", bounds.max_cycle},
                                  {"budget", bounds.budget}}},
                  {"partial", partial},
                  {"summary", summary},
                  {"spaces", spaces}};
  return o.done();
}

// ---- u-structures and uniformities

Json base_json(const GradedBase& b) { return space_json(b); }

Json topology_json(const FinSpace& s) {
  Json opens = Json::array();
  for (PointSet o : s.opens()) opens.push_back(set_json(s, o));
  return Json{{"points", s.labels()}, {"opens", opens}};
}

Report uspace_verb(const Workspace& ws, const RunOptions& opt) {
  Out o;
  Json items = Json::array();
  std::vector<std::string> names = opt.names;
  if (names.empty()) {
    for (const auto& [n, _] : ws.ustructures) names.push_back(n);
    for (const auto& [n, _] : ws.uniformities) names.push_back(n);
    if (names.empty()) throw InputError("the workspace has no ustructures or uniformities");
  }
  for (const auto& name : names) {
    if (auto it = ws.ustructures.find(name); it != ws.ustructures.end()) {
      const UStructureFin& s = it->second;
      const FinSpace tau = induced_topology(s);
      const LsbSufficientReport lsb = lsb_sufficient_check(s);
      Json j{{"name", name}, {"kind", "ustructure"}, {"induced_topology", topology_json(tau)}};
      j["u_space"] = is_u_space(s);
      j["intersection_closed"] = lsb.intersection_closed;
      j["halving_failure"] = lsb.halving_failure ? Json(*lsb.halving_failure) : Json(nullptr);
      j["symmetry_failure"] = lsb.symmetry_failure ? Json(*lsb.symmetry_failure) : Json(nullptr);
      j["centred"] = lsb.centred;
      o.line("ustructure " + name + ": induced topology has " + std::to_string(tau.opens().size()) + " opens");
      o.line("  u-space: " + std::string(is_u_space(s) ? "yes" : "no"));
      if (lsb.halving_failure) o.line("  halving fails at radius " + std::to_string(*lsb.halving_failure));
      if (lsb.symmetry_failure) o.line("  symmetry fails at radius " + std::to_string(*lsb.symmetry_failure));
      if (lsb.base_validation.ok()) {
        const GradedBase b = induced_base(s, opt.raw_balls);
        j["base"] = base_json(b);
        j["lsb"] = verdict_json(b, lsb.lsb);
        o.line("  ball base lsb: " + verdict_text(b, lsb.lsb));
      } else {
        std::string why;
        for (const auto& i : lsb.base_validation.issues) why += (why.empty() ? "" : "; ") + i.kind + ": " + i.detail;
        j["base_issues"] = why;
        o.line("  balls do not form a graded base: " + why);
        o.code(kExitPrecondition);
      }
      j["sufficient_conditions"] = lsb.conditions_hold();
      j["consistent"] = lsb.consistent();
      o.line("  sufficient conditions: " + std::string(lsb.conditions_hold() ? "hold" : "do not hold") +
             (lsb.consistent() ? "" : ", yet the base is not lsb"));
      if (!lsb.consistent()) o.code(kExitFails);
      items.push_back(j);
      continue;
    }
    auto it = ws.uniformities.find(name);
    if (it == ws.uniformities.end()) throw InputError("no ustructure or uniformity named '" + name + "'");
    const GradedBase b = standard_base(it->second, opt.raw_balls);
    const Classification c = classify_base(b);
    items.push_back(Json{{"name", name}, {"kind", "uniformity"}, {"base", base_json(b)}, {"lsb", verdict_json(b, c.lsb)}});
    o.line("uniformity " + name + ": standard base with " + std::to_string(b.levels().size()) + " levels, lsb: " +
           verdict_text(b, c.lsb));
    o.status(c.lsb.status);
  }
  o.r.json = Json{{"verb", "uspace"}, {"raw_balls", opt.raw_balls}, {"items", items}};
  return o.done();
}

// ---- completions

Report complete_verb(const Workspace& ws, const RunOptions& opt) {
  Out o;
  if (opt.names.empty()) throw InputError("complete needs a sub-verb: eval, eq, extend or check");
  const std::string sub = opt.names[0];
  const std::vector<std::string> rest(opt.names.begin() + 1, opt.names.end());
  auto seq = [&](std::size_t i) -> const SequenceDoc& { return one(ws.sequences, rest, i, "sequence"); };
  Json j{{"verb", "complete"}, {"sub", sub}};
  if (sub == "eval") {
    const std::size_t k = need_depth(opt, "complete eval");
    const ModulusCauchySeq& s = seq(0).point.rep;
    const std::size_t n = s.modulus(k);
    const Rational v = s.at(n);
    j.update(Json{{"sequence", name_at(rest, 0, s.name)}, {"level", k}, {"index", n}, {"value", format_rational(v)},
                  {"radius", format_rational(DensePresentation::radius(k))}});
    o.line(name_at(rest, 0, s.name) + " at level " + std::to_string(k) + ": term " + std::to_string(n) + " = " +
           format_rational(v) + " (within 2^-" + std::to_string(k) + " of the limit)");
  } else if (sub == "eq") {
    const std::size_t k = need_depth(opt, "complete eq");
    const EqResult r = eq_at_level(seq(0).point, seq(1).point, k);
    const char* said = r.status == Status::Holds ? "equal" : r.status == Status::Fails ? "apart" : "undecided";
    j.update(Json{{"p", name_at(rest, 0, "")}, {"q", name_at(rest, 1, "")}, {"level", k}, {"status", to_string(r.status)},
                  {"relation", said}, {"internal_level", r.level}, {"index_p", r.index_p}, {"index_q", r.index_q},
                  {"value_p", format_rational(r.value_p)}, {"value_q", format_rational(r.value_q)},
                  {"distance", Json::array({format_rational(r.distance.lo), format_rational(r.distance.hi)})}});
    o.line(std::string(said) + " at level " + std::to_string(k) + " (internal level " + std::to_string(r.level) +
           ", terms " + format_rational(r.value_p) + " and " + format_rational(r.value_q) + ")");
    o.status(r.status);
  } else if (sub == "extend") {
    const std::size_t k = need_depth(opt, "complete extend");
    if (!opt.map || !opt.omega) throw InputError("complete extend needs --map and --omega");
    const Expr f = Expr::parse(*opt.map), om = Expr::parse(*opt.omega);
    const DenseMap fm = [&](const Rational& x) {
      auto v = f.eval_exact(Env{{"x", Interval(x)}});
      if (!v) throw InputError("--map must evaluate exactly on rationals");
      return *v;
    };
    const LevelMap omega = [&](std::size_t kk) {
      auto v = om.eval_exact(Env{{"k", Interval(Rational(static_cast<long>(kk)))}});
      if (!v || v->get_den() != 1 || *v < 0) throw InputError("--omega must give nonnegative integers");
      return static_cast<std::size_t>(v->get_num().get_ui());
    };
    try {
      const Extension e = uniform_extend(fm, omega, seq(0).point, k);
      j.update(Json{{"sequence", name_at(rest, 0, "")}, {"map", *opt.map}, {"omega", *opt.omega}, {"level", k},
                    {"value", format_rational(e.value)}, {"index", e.index}, {"omega_level", e.level},
                    {"samples", e.samples}, {"status", "holds"}});
      o.line("F(p) at level " + std::to_string(k) + ": " + format_rational(e.value) + " (term " +
             std::to_string(e.index) + ", omega level " + std::to_string(e.level) + ")");
    } catch (const PreconditionUnmet& e) {
      j.update(Json{{"status", "precondition-unmet"}, {"detail", e.what()}});
      o.line(std::string("precondition unmet: ") + e.what());
      o.code(kExitPrecondition);
    }
  } else if (sub == "check") {
    const std::size_t horizon = need_depth(opt, "complete check");
    const CauchyCheckResult r = cauchy_check(seq(0).point.rep, horizon);
    j.update(Json{{"sequence", name_at(rest, 0, "")}, {"horizon", horizon}, {"status", to_string(r.status)},
                  {"levels_checked", r.levels_checked}});
    if (r.status == Status::Fails) j.update(Json{{"level", r.level}, {"i", r.i}, {"j", r.j}});
    if (!r.detail.empty()) j["detail"] = r.detail;
    o.line(std::string("modulus check to horizon ") + std::to_string(horizon) + ": " + to_string(r.status) + ", " +
           std::to_string(r.levels_checked) + " levels" + (r.detail.empty() ? "" : " (" + r.detail + ")"));
    o.status(r.status);
  } else {
    throw InputError("unknown complete sub-verb '" + sub + "' (eval, eq, extend, check)");
  }
  o.r.json = j;
  return o.done();
}

// ---- function spaces

Report funcspace_verb(const Workspace& ws, const RunOptions& opt) {
  Out o;
  if (opt.names.empty()) throw InputError("funcspace needs a sub-verb: product, uc-check, pointwise, limit-suite or theorems");
  const std::string sub = opt.names[0];
  const std::vector<std::string> rest(opt.names.begin() + 1, opt.names.end());
  Json j{{"verb", "funcspace"}, {"sub", sub}};
  auto fn = [&]() -> const FunctionDoc& { return one(ws.functions, rest, 0, "function"); };
  auto limit_of = [](const FunctionDoc& f) -> const Expr& {
    if (!f.limit) throw InputError("function " + f.seq.name + " has no \"limit\"");
    return *f.limit;
  };
  UcSchedule schedule;
  if (sub == "product") {
    const ProductDoc& p = one(ws.products, rest, 0, "product");
    const ProductBase pb = product_base(p.spec);
    const ProductBase uc = uc_subbase(p.spec, p.z);
    const FinSpace& ps = pb.base.space();
    j.update(Json{{"product", name_at(rest, 0, "")}, {"points", ps.point_count()}, {"opens", ps.opens().size()},
                  {"levels", pb.base.levels().size()}, {"z", to_string(p.z.kind)},
                  {"uc_opens", uc.base.space().opens().size()},
                  {"uc_contains_product", lattice_contained(ps, uc.base.space())}});
    o.line("product of " + std::to_string(p.factors.size()) + " factors: " + std::to_string(ps.point_count()) +
           " points, " + std::to_string(ps.opens().size()) + " opens, " + std::to_string(pb.base.levels().size()) +
           " levels");
    o.line(std::string("uc topology for Z = ") + to_string(p.z.kind) + ": " +
           std::to_string(uc.base.space().opens().size()) + " opens");
    bool same = true;
    for (const auto& f : p.factors) same = same && f == p.factors.front();
    if (same) {
      const ProductBase zo = compact_open_subbase(p.spec, p.z);
      const bool inside = lattice_contained(zo.base.space(), uc.base.space());
      j["zo_opens"] = zo.base.space().opens().size();
      j["zo_in_uc"] = inside;
      o.line(std::string("Z-open topology: ") + std::to_string(zo.base.space().opens().size()) + " opens, inside uc: " +
             (inside ? "yes" : "no"));
      if (!inside) o.code(kExitFails);
    }
  } else if (sub == "uc-check") {
    const std::size_t k = need_depth(opt, "funcspace uc-check");
    const FunctionDoc& f = fn();
    const UcResult r = uniform_convergence_check(f.seq, limit_of(f), f.region, k, schedule);
    j.update(Json{{"function", f.seq.name}, {"region", f.region.text()}, {"level", k}, {"status", to_string(r.status)}});
    if (r.status == Status::Holds) j["alpha"] = r.alpha;
    if (r.status == Status::Fails)
      j.update(Json{{"index", r.index},
                    {"witness", format_rational(r.witness)},
                    {"witness_approx", double_json(r.witness)},
                    {"deviation", Json::array({format_rational(r.deviation.lo), format_rational(r.deviation.hi)})}});
    j["evaluations"] = r.evaluations;
    if (!r.detail.empty()) j["detail"] = r.detail;
    o.line("uniform convergence of " + f.seq.name + " on " + f.region.text() + " at level " + std::to_string(k) + ": " +
           to_string(r.status) + (r.detail.empty() ? "" : " (" + r.detail + ")"));
    o.status(r.status);
  } else if (sub == "pointwise") {
    const std::size_t horizon = need_depth(opt, "funcspace pointwise");
    if (!opt.modulus) throw InputError("funcspace pointwise needs --modulus (an expression in k and t)");
    const FunctionDoc& f = fn();
    const PointwiseCauchyResult r = pointwise_cauchy_check(f.seq, Expr::parse(*opt.modulus), f.region, 8, horizon);
    j.update(Json{{"function", f.seq.name}, {"modulus", *opt.modulus}, {"horizon", horizon},
                  {"status", to_string(r.status)}, {"points", r.points.size()}});
    if (r.witness) j["witness"] = format_rational(*r.witness);
    o.line("pointwise modulus check of " + f.seq.name + " at " + std::to_string(r.points.size()) + " points: " +
           to_string(r.status) + (r.witness ? ", witness t = " + format_rational(*r.witness) : ""));
    o.status(r.status);
  } else if (sub == "limit-suite") {
    const std::size_t k = need_depth(opt, "funcspace limit-suite");
    const FunctionDoc& f = fn();
    try {
      const RegularityReport r = limit_regularity_suite(f.seq, limit_of(f), f.region, k, schedule);
      Json levels = Json::array();
      for (const auto& l : r.levels) {
        levels.push_back(Json{{"level", l.level}, {"alpha", l.alpha}, {"delta", format_rational(l.delta)},
                              {"pairs", l.pairs}, {"factor_violations", l.factor_violations},
                              {"limit_violations", l.limit_violations}});
        o.line("level " + std::to_string(l.level) + ": alpha " + std::to_string(l.alpha) + ", delta " +
               format_rational(l.delta) + ", " + std::to_string(l.pairs) + " pairs, " +
               std::to_string(l.factor_violations + l.limit_violations) + " violations" +
               (l.first_violation.empty() ? "" : " (" + l.first_violation + ")"));
      }
      j.update(Json{{"function", f.seq.name}, {"status", r.ok() ? "holds" : "fails"}, {"levels", levels}});
      o.status(r.ok() ? Status::Holds : Status::Fails);
    } catch (const PreconditionUnmet& e) {
      j.update(Json{{"function", f.seq.name}, {"status", "precondition-unmet"}, {"detail", e.what()}});
      o.line(std::string("precondition unmet: ") + e.what());
      o.code(kExitPrecondition);
    }
  } else if (sub == "theorems") {
    ProductSuiteBounds b;
    b.max_cycle = opt.max_cycle;
    const ProductSuiteReport r = product_theorem_suite(b);
    Json lines = Json::array();
    for (const auto& l : r.lines) {
      lines.push_back(Json{{"name", l.name}, {"cases", l.cases}, {"violations", l.violations}, {"examples", l.examples}});
      o.line(l.name + ": " + std::to_string(l.cases) + " cases, " + std::to_string(l.violations) + " violations");
    }
    j.update(Json{{"products", r.products}, {"lines", lines}});
    if (!r.ok()) o.code(kExitFails);
  } else {
    throw InputError("unknown funcspace sub-verb '" + sub + "' (product, uc-check, pointwise, limit-suite, theorems)");
  }
  o.r.json = j;
  return o.done();
}

// ---- integration

Json element_json(const Element& e, const ModuleSpec& mod) {
  if (e.size() == 1) return mod.kind == ModuleSpec::Kind::ModP ? Json(e[0].get_num().get_si()) : double_json(e[0]);
  Json a = Json::array();
  for (const auto& x : e) a.push_back(mod.kind == ModuleSpec::Kind::ModP ? Json(x.get_num().get_si()) : double_json(x));
  return a;
}

Json exact_json(const Element& e) {
  Json a = Json::array();
  for (const auto& x : e) a.push_back(format_rational(x));
  return a;
}

IntegralDoc with_module(const IntegralDoc& d, const std::string& name, const std::string& module) {
  Json desc = d.descriptor;
  desc["module"] = module;
  Workspace tmp;
  load_document(tmp, Json{{"version", 1}, {"integrals", Json{{name, desc}}}}.dump(), "--module");
  return tmp.integrals.at(name);
}

Report integrate_verb(const Workspace& ws, const RunOptions& opt) {
  Out o;
  const std::string name = opt.names.empty() && ws.integrals.size() == 1 ? ws.integrals.begin()->first
                                                                         : name_at(opt.names, 0, "");
  IntegralDoc d = one(ws.integrals, opt.names, 0, "integral");
  if (opt.module) d = with_module(d, name, *opt.module);
  IntegrateOptions io = d.options;
  if (opt.depth) io.depth = *opt.depth;
  if (io.depth > 24) throw InputError("depth is limited to 24");
  if (opt.tags) io.tags = parse_tag_rule(*opt.tags);
  if (opt.tol) io.tol = opt.tol;
  Json j;
  try {
    const IntegrateResult r = integrate(d.integrand, d.algebra, d.measure, d.module, io);
    j["value"] = element_json(r.value, d.module);
    j["bound"] = double_json(r.bound);
    j["outcome"] = to_string(r.outcome);
    j["exact_value"] = exact_json(r.value);
    j["exact_bound"] = format_rational(r.bound);
    j["integral"] = name;
    j["module"] = d.module.text();
    j["measure"] = d.measure.name;
    j["depth"] = io.depth;
    j["tags"] = to_string(io.tags);
    j["tol"] = format_rational(r.tol);
    if (r.outcome == IntegrateResult::Outcome::Diverged)
      j["witness"] = Json{{"rule_a", r.rule_a}, {"value_a", exact_json(r.value_a)},
                          {"rule_b", r.rule_b}, {"value_b", exact_json(r.value_b)}};
    Json trace = Json::array();
    for (const auto& t : r.trace) {
      Json e{{"depth", t.depth}, {"chain", exact_json(t.chain)}, {"step", format_rational(t.step)}};
      e["spread"] = t.spread ? Json(format_rational(*t.spread)) : Json(nullptr);
      trace.push_back(e);
    }
    j["trace"] = trace;
    j["detail"] = r.detail;
    o.line("integral " + name + " (" + d.module.text() + ", " + d.measure.name + ", " + to_string(io.tags) +
           " tags, depth " + std::to_string(io.depth) + "): " + to_string(r.outcome));
    o.line("  value " + format_element(r.value, d.module) + " +- " + format_rational(r.bound) + " (tol " +
           format_rational(r.tol) + ")");
    if (r.outcome == IntegrateResult::Outcome::Diverged)
      o.line("  witness: " + r.rule_a + " tags give " + format_element(r.value_a, d.module) + ", " + r.rule_b +
             " tags give " + format_element(r.value_b, d.module));
    o.line("  " + r.detail);
    for (const auto& t : r.trace)
      o.line("  depth " + std::to_string(t.depth) + ": " + format_element(t.chain, d.module) + ", step " +
             format_rational(t.step) + (t.spread ? ", spread " + format_rational(*t.spread) : ""));
    o.code(r.outcome == IntegrateResult::Outcome::Converged  ? kExitHolds
           : r.outcome == IntegrateResult::Outcome::Diverged ? kExitFails
                                                              : kExitUndecided);
  } catch (const PreconditionUnmet& e) {
    j = Json{{"integral", name}, {"outcome", "precondition-unmet"}, {"detail", e.what()}};
    o.line(std::string("precondition unmet: ") + e.what());
    o.code(kExitPrecondition);
  }
  o.r.json = j;
  return o.done();
}

}  // namespace

Report run(const std::string& verb, const Workspace& ws, const RunOptions& opt) {
  if (verb == "validate") return validate_verb(ws, opt);
  if (verb == "classify") return classify_verb(ws, opt);
  if (verb == "approach") return approach_verb(ws, opt);
  if (verb == "cauchy") return cauchy_verb(ws, opt);
  if (verb == "limits") return limits_verb(ws, opt);
  if (verb == "suite") return suite_verb(ws, opt);
  if (verb == "uspace") return uspace_verb(ws, opt);
  if (verb == "complete") return complete_verb(ws, opt);
  if (verb == "funcspace") return funcspace_verb(ws, opt);
  if (verb == "integrate") return integrate_verb(ws, opt);
  throw InputError("unknown verb '" + verb + "'");
}

}  // namespace basespace
