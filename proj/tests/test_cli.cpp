#include "doctest.h"

#include <cstdio>
#include <sys/wait.h>

#include "basespace/io.hpp"

using namespace basespace;

namespace {

struct Run {
  int exit = -1;
  std::string out;
};

Run cli(const std::string& args) {
  Run r;
  const std::string cmd = std::string("\"") + BASESPACE_CLI + "\" " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& file) { return std::string("\"") + BASESPACE_DATA + "/" + file + "\""; }

bool mentions(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("classify sierpinski reports an lsb failure with a witness") {
  const Run r = cli("classify " + data("sierpinski.json"));
  CHECK(r.exit == 1);
  CHECK(mentions(r.out, "lsb: fails, witness (e0, a, {a}, b)"));
  const Run j = cli("classify --json " + data("sierpinski.json"));
  const Json doc = Json::parse(j.out);
  CHECK(doc["spaces"][0]["lsb"]["status"] == "fails");
  CHECK(doc["spaces"][0]["lsb"]["witness"]["excluded"] == "b");
}

TEST_CASE("integrate lebesgue at depth 16") {
  const Run r = cli("integrate " + data("lebesgue.json") + " --depth 16 --json");
  CHECK(r.exit == 0);
  // Value and bound lead the object.
  CHECK(r.out.rfind(R"({"value":0.5,"bound":1.52587890625e-05,)", 0) == 0);
  const Json doc = Json::parse(r.out);
  CHECK(doc["exact_bound"] == "1/65536");
  CHECK(doc["trace"].size() == 17);
}

TEST_CASE("exit codes") {
  CHECK(cli("approach " + data("sierpinski.json") + " const_a const_b").exit == 0);
  CHECK(cli("approach " + data("sierpinski.json") + " const_b const_a").exit == 1);
  CHECK(cli("integrate " + data("integrals.json") + " oscillating").exit == 1);
  CHECK(cli("integrate " + data("integrals.json") + " mod5").exit == 0);
  CHECK(cli("integrate " + data("lebesgue.json") + " --depth 8 --tol 1/1000000").exit == 3);
  CHECK(cli("complete " + data("completion.json") + " eq sqrt2_dec sqrt2_cf --depth 20").exit == 0);
  CHECK(cli("complete " + data("completion.json") + " eq sqrt2_dec approx --depth 12").exit == 1);
  CHECK(cli("funcspace " + data("functions.json") + " uc-check powers --depth 2").exit == 1);
  CHECK(cli("funcspace " + data("functions.json") + " limit-suite powers --depth 2").exit == 2);
  // Nothing found before the budget runs out is undecided, not a failure.
  CHECK(cli("suite --budget 10 " + data("sierpinski.json")).exit == 3);
  CHECK(cli("suite " + data("sierpinski.json")).exit == 1);
  CHECK(cli("classify missing-file.json").exit == 4);
  CHECK(cli("frobnicate " + data("sierpinski.json")).exit == 4);
  CHECK(cli("approach " + data("sierpinski.json") + " const_a nosuchnet").exit == 4);
  CHECK(cli("integrate " + data("lebesgue.json") + " --module modp:5").exit == 4);
  CHECK(cli("integrate --bogus-flag " + data("lebesgue.json")).exit == 4);
}

TEST_CASE("input errors are reported as JSON under --json") {
  const Run r = cli("classify --json missing-file.json");
  CHECK(r.exit == 4);
  CHECK(Json::parse(r.out)["exit"] == 4);
}

TEST_CASE("json output is deterministic") {
  const std::string args = "classify --json --seed 3 " + data("sierpinski.json") + " " + data("uniform.json");
  CHECK(cli(args).out == cli(args).out);
  const std::string u = "uspace --json " + data("uniform.json");
  CHECK(cli(u).out == cli(u).out);
}
