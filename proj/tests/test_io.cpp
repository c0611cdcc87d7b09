#include "doctest.h"

#include "basespace/io.hpp"

using namespace basespace;

namespace {

const char* kSierpinski = R"js({
  "version": 1,
  "spaces": {
    "sierpinski": {
      "points": ["a", "b"],
      "opens": [[], [0], [0, 1]],
      "base": {"levels": {"e0": [1, 2]}}
    }
  }
})js";

std::string error_of(Workspace& ws, const std::string& text) {
  try {
    load_document(ws, text, "doc");
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

bool mentions(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

const char* kEverything = R"js({
  "version": 1,
  "spaces": {
    "s": {"points": ["a", "b"], "opens": [[], ["a"], ["a", "b"]]},
    "d2": {"points": ["0", "1"], "opens": [[], [0], [1], [0, 1]], "base": {"levels": {"e0": [1, 2], "e1": [3]}}}
  },
  "enumerate": {"points": 2, "prefix": "two_"},
  "nets": {"u": {"space": "s", "prefix": ["b"], "cycle": ["a", "b"]}},
  "binets": {"w": {"space": "s", "row_prefix": 0, "col_prefix": 1, "table": [["a", "b"], ["b", "a"]]}},
  "maps": {"f": {"source": "s", "target": "d2", "table": ["1", "0"]}},
  "uniformities": {"un": {"points": ["x", "y"], "entourages": [[[1, 0], [0, 1]], [[1, 1], [1, 1]]]}},
  "ustructures": {
    "cyc": {"preset": "cyclic-difference", "n": 4, "divisors": [2]},
    "eq": {"preset": "equality", "carrier": "s"},
    "fu": {"preset": "from-uniformity", "uniformity": "un"},
    "manual": {"carrier": "d2", "aux": "d2", "table": [["0", "1"], ["1", "0"]], "radii": [[1]]}
  },
  "sequences": {
    "dec": {"kind": "decimal-truncation", "target": "sqrt2"},
    "tab": {"kind": "table", "values": ["1", "3/2", "7/5"], "modulus": [0, 1, 2]},
    "ex": {"kind": "expression", "term": "1/(n+1)", "modulus": "2^k"},
    "pt": {"kind": "point", "value": "1.414"}
  },
  "functions": {
    "pow": {"kind": "expression", "term": "t^n", "limit": "0", "region": {"lo": 0, "hi": 1, "hi_open": true}},
    "hat": {"kind": "table", "points": [0, "1/2", 1], "values": [[0, 1, 0], [0, 0, 0]]}
  },
  "products": {
    "p": {"factors": ["s", "d2"], "index": ["i", "j"], "z": "whole"},
    "q": {"power": "s", "index": ["i", "j"], "z": {"explicit": [["i"], ["i", "j"]]}}
  },
  "integrals": {
    "leb": {"universe": {"interval": [0, 1]}, "module": "real:1", "measure": "length", "integrand": "t", "depth": 8},
    "m5": {"universe": {"labels": ["A", "B", "C"]}, "module": "modp:5",
           "measure": {"kind": "table", "values": [1, 2, 3]}, "integrand": {"table": [2, 0, 4]}}
  }
})js";

}  // namespace

TEST_CASE("a well-formed sierpinski document gives one space and one base") {
  Workspace ws;
  load_document(ws, kSierpinski);
  REQUIRE(ws.size() == 1);
  const GradedBase& b = ws.space("sierpinski");
  CHECK(b.space() == FinSpace::sierpinski());
  REQUIRE(b.levels().size() == 1);
  CHECK(b.levels()[0].label == "e0");
  CHECK(b.kernel("b") == b.space().full());
  CHECK(b.kernel("a") == PointSet::of({0}));
}

TEST_CASE("open indices follow the listed order, not the canonical one") {
  Workspace ws;
  load_document(ws, R"js({"version": 1, "spaces": {"s": {"points": ["a", "b"], "opens": [["a", "b"], [], ["b"]],
                        "base": {"levels": {"e0": [0], "e1": [2, 0]}}}}})js");
  const GradedBase& b = ws.space("s");
  CHECK(b.members(0) == std::vector<PointSet>{PointSet::of({0, 1})});
  CHECK(b.members(1) == std::vector<PointSet>{PointSet::of({1}), PointSet::of({0, 1})});
}

TEST_CASE("a missing base defaults to the kernel base") {
  Workspace ws;
  load_document(ws, R"js({"version": 1, "spaces": {"s": {"points": ["a", "b"], "opens": [[], [0], [0, 1]]}}})js");
  const GradedBase& b = ws.space("s");
  const GradedBase k = kernel_base(b.space_ref());
  CHECK(b.levels()[0].members == k.levels()[0].members);
}

TEST_CASE("validation errors name the object and the rule") {
  Workspace ws;
  SUBCASE("dangling open index names the base level") {
    const std::string e = error_of(ws, R"js({"version": 1, "spaces": {"s": {"points": ["a", "b"],
        "opens": [[], [0], [0, 1]], "base": {"levels": {"eps7": [1, 5]}}}}})js");
    CHECK(mentions(e, "eps7"));
    CHECK(mentions(e, "spaces.s"));
  }
  SUBCASE("not a topology") {
    const std::string e = error_of(ws, R"js({"version": 1, "spaces": {"s": {"points": ["a", "b", "c"],
        "opens": [[], [0], [1], [0, 1, 2]]}}})js");
    CHECK(mentions(e, "topology"));
  }
  SUBCASE("base level that does not cover") {
    const std::string e = error_of(ws, R"js({"version": 1, "spaces": {"s": {"points": ["a", "b"],
        "opens": [[], [0], [0, 1]], "base": {"levels": {"e0": [1]}}}}})js");
    CHECK(mentions(e, "non-cover"));
  }
  SUBCASE("duplicate object names across sections") {
    const std::string e = error_of(ws, R"js({"version": 1, "spaces": {"x": {"points": ["a"], "opens": [[], [0]]}},
        "nets": {"x": {"space": "x", "cycle": ["a"]}}})js");
    CHECK(mentions(e, "duplicate object name 'x'"));
  }
  SUBCASE("duplicate keys in one object") {
    const std::string e = error_of(ws, R"js({"version": 1, "spaces": {"x": {"points": ["a"], "opens": [[], [0]]},
        "x": {"points": ["b"], "opens": [[], [0]]}}})js");
    CHECK(mentions(e, "duplicate key 'x'"));
  }
  SUBCASE("unknown fields") {
    const std::string e = error_of(ws, R"js({"version": 1, "spaces": {"x": {"points": ["a"], "opens": [[], [0]],
        "colour": "red"}}})js");
    CHECK(mentions(e, "unknown field 'colour'"));
  }
  SUBCASE("version") {
    CHECK(mentions(error_of(ws, R"js({"spaces": {}})js"), "missing field 'version'"));
    CHECK(mentions(error_of(ws, R"js({"version": 2})js"), "version"));
  }
  SUBCASE("unknown point in a net") {
    const std::string e = error_of(ws, R"js({"version": 1, "spaces": {"x": {"points": ["a"], "opens": [[], [0]]}},
        "nets": {"u": {"space": "x", "cycle": ["z"]}}})js");
    CHECK(mentions(e, "nets.u.cycle"));
    CHECK(mentions(e, "unknown point 'z'"));
  }
  SUBCASE("bad radii") {
    const std::string e = error_of(ws, R"js({"version": 1, "spaces": {"s": {"points": ["a", "b"],
        "opens": [[], [0], [0, 1]]}}, "ustructures": {"v": {"carrier": "s", "aux": "s",
        "table": [["a", "b"], ["b", "a"]], "radii": [[7]]}}})js");
    CHECK(mentions(e, "ustructures.v.radii"));
  }
  SUBCASE("integral of a non-exact integrand is rejected when run, not loaded") {
    load_document(ws, R"js({"version": 1, "integrals": {"i": {"universe": {"interval": [0, 1]},
        "measure": "length", "integrand": "exp(t)"}}})js");
    CHECK(ws.integrals.size() == 1);
  }
  CHECK(ws.spaces.empty());
}

TEST_CASE("syntax errors report line and column") {
  Workspace ws;
  const std::string e = error_of(ws, "{\n  \"version\": 1,\n  \"spaces\": {,}\n}");
  CHECK(mentions(e, "line 3, column 14"));
  CHECK(mentions(error_of(ws, "[1, 2"), "line 1"));
}

TEST_CASE("loading is all-or-nothing") {
  Workspace ws;
  load_document(ws, kSierpinski);
  const std::string e = error_of(ws, R"js({"version": 1, "spaces": {"t": {"points": ["a"], "opens": [[], [0]]}},
      "nets": {"u": {"space": "nowhere", "cycle": [0]}}})js");
  CHECK(mentions(e, "unknown space 'nowhere'"));
  CHECK(ws.size() == 1);
  CHECK_FALSE(ws.contains("t"));
  CHECK(mentions(error_of(ws, kSierpinski), "duplicate object name 'sierpinski'"));
  CHECK(ws.size() == 1);
}

TEST_CASE("every section loads and round-trips") {
  Workspace ws;
  load_document(ws, kEverything);
  CHECK(ws.spaces.size() == 2 + 4);
  CHECK(ws.contains("two_0"));
  CHECK(ws.contains("two_3"));
  CHECK(ws.net("u").net.cycle == std::vector<Point>{0, 1});
  CHECK(ws.maps.at("f").map.table == std::vector<Point>{1, 0});
  CHECK(ws.ustructures.size() == 4);
  CHECK(ws.integrals.at("m5").module.p == 5);
  CHECK(ws.products.at("q").spec.factors.size() == 2);

  // The table function is the piecewise-linear interpolant, the last row repeating.
  const FunctionSeq& hat = ws.functions.at("hat").seq;
  CHECK(hat.at(0, Rational(1, 4)).contains(Rational(1, 2)));
  CHECK(hat.at(0, Rational(3, 4)).contains(Rational(1, 2)));
  CHECK(hat.at(0, 1).contains(Rational(0)));
  CHECK(hat.at(5, Rational(1, 2)).contains(Rational(0)));

  const Json first = serialize(ws);
  Workspace again;
  load_document(again, first.dump());
  CHECK(serialize(again).dump() == first.dump());
  CHECK(again.size() == ws.size());
  for (const auto& [name, b] : ws.spaces) {
    CHECK(again.space(name).space() == b.space());
    CHECK(again.space(name).levels().size() == b.levels().size());
    for (std::size_t i = 0; i < b.levels().size(); ++i) CHECK(again.space(name).members(i) == b.members(i));
  }
  for (const auto& [name, s] : ws.ustructures) {
    const UStructureFin& t = again.ustructures.at(name);
    CHECK(*t.carrier == *s.carrier);
    CHECK(*t.aux == *s.aux);
    CHECK(t.table == s.table);
    CHECK(t.radii == s.radii);
  }
  for (const auto& [name, u] : ws.uniformities) CHECK(again.uniformities.at(name).entourages == u.entourages);
}

TEST_CASE("rational fields take integers or strings") {
  Workspace ws;
  CHECK(mentions(error_of(ws, R"js({"version": 1, "sequences": {"p": {"kind": "point", "value": 1.5}}})js"),
                 "rational string"));
  load_document(ws, R"js({"version": 1, "sequences": {"p": {"kind": "point", "value": "3/2"}}})js");
  CHECK(ws.sequences.at("p").point.rep.at(7) == Rational(3, 2));
  CHECK(rational_json(Rational(4)) == Json(4));
  CHECK(rational_json(Rational(1, 3)) == Json("1/3"));
}
