// basespace VERB [DOCUMENT.json ...] [NAME ...] [flags]

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "basespace/report.hpp"

using namespace basespace;

namespace {

bool is_document(const std::string& arg) {
  if (arg.size() > 5 && arg.compare(arg.size() - 5, 5, ".json") == 0) return true;
  std::error_code ec;
  return std::filesystem::is_regular_file(arg, ec);
}

int report_error(bool json, int code, const std::string& msg) {
  if (json)
    std::cout << Json{{"error", msg}, {"exit", code}}.dump() << '\n';
  std::cerr << "basespace: " << msg << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Base spaces, approach of nets, completions, function spaces and module-valued integration"};
  std::string verb;
  std::vector<std::string> args;
  RunOptions opt;
  bool json = false;
  std::string tol;
  std::size_t depth = 0;
  std::string module, tags, map, omega, modulus;

  std::string verb_list;
  for (const auto& v : verbs()) verb_list += (verb_list.empty() ? "" : ", ") + v;
  app.add_option("verb", verb, "One of: " + verb_list)->required();
  app.add_option("args", args, "Document files (*.json) followed by object names or sub-verbs");
  app.add_flag("--json", json, "Emit the machine-readable report");
  app.add_option("--seed", opt.seed, "Seed for sampled checks")->default_val(0);
  app.add_option("--budget", opt.budget, "Upper bound on suite evaluations (0 = unlimited)");
  app.add_option("--tol", tol, "Tolerance as a rational, e.g. 1/1024");
  auto* depth_opt = app.add_option("--depth", depth, "Refinement depth, level or horizon");
  app.add_flag("--raw-balls", opt.raw_balls, "Use raw balls instead of their interiors as base members");
  app.add_option("--module", module, "real:n, complex:k, modp:p or modp:p:m");
  app.add_option("--tags", tags, "left, right, midpoint, third or swap");
  app.add_option("--max-cycle", opt.max_cycle, "Longest net cycle in suites")->default_val(2);
  app.add_option("--max-prefix", opt.max_prefix, "Longest net prefix in suites")->default_val(2);
  app.add_option("--map", map, "complete extend: f(x) as an expression in x");
  app.add_option("--omega", omega, "complete extend: modulus of uniform continuity in k");
  app.add_option("--modulus", modulus, "funcspace pointwise: claimed modulus in k and t");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    std::vector<std::string> files;
    for (const auto& a : args) (is_document(a) ? files : opt.names).push_back(a);
    if (!tol.empty()) opt.tol = parse_rational(tol);
    if (*depth_opt) opt.depth = depth;
    if (!module.empty()) opt.module = module;
    if (!tags.empty()) opt.tags = tags;
    if (!map.empty()) opt.map = map;
    if (!omega.empty()) opt.omega = omega;
    if (!modulus.empty()) opt.modulus = modulus;

    const Workspace ws = load_files(files);
    const Report r = run(verb, ws, opt);
    if (json)
      std::cout << r.json.dump() << '\n';
    else
      std::cout << r.text;
    return r.exit;
  } catch (const InputError& e) {
    return report_error(json, kExitInput, e.what());
  } catch (const std::domain_error& e) {
    return report_error(json, kExitInput, e.what());
  } catch (const PreconditionUnmet& e) {
    return report_error(json, kExitPrecondition, e.what());
  } catch (const PrecisionExhausted& e) {
    return report_error(json, kExitUndecided, e.what());
  }
}
