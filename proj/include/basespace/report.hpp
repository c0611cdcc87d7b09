#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "basespace/io.hpp"

namespace basespace {

/// Process exit codes.
enum ExitCode : int {
  kExitHolds = 0,
  kExitFails = 1,
  kExitPrecondition = 2,
  kExitUndecided = 3,
  kExitInput = 4,
};

/// Fails outranks precondition-unmet, which outranks unknown.
int exit_code(Status s);
int worst_exit(int a, int b);

struct RunOptions {
  std::vector<std::string> names;  // object names (and sub-verbs), in order
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;       // 0 = unlimited
  std::optional<Rational> tol;
  std::optional<std::size_t> depth;
  bool raw_balls = false;
  std::optional<std::string> module;
  std::optional<std::string> tags;
  std::size_t max_cycle = 2;
  std::size_t max_prefix = 2;
  std::optional<std::string> map;      // complete extend: f(x)
  std::optional<std::string> omega;    // complete extend: omega(k)
  std::optional<std::string> modulus;  // funcspace pointwise: m(k, t)
};

struct Report {
  int exit = kExitHolds;
  std::string text;
  Json json = Json::object();
};

/// Verbs: validate, classify, approach, cauchy, limits, suite, uspace,
/// complete, funcspace, integrate. Input problems throw InputError; the
/// caller maps them to kExitInput.
Report run(const std::string& verb, const Workspace& ws, const RunOptions& opt);

const std::vector<std::string>& verbs();

}  // namespace basespace
