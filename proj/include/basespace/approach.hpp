#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "basespace/net.hpp"
#include "basespace/space.hpp"

namespace basespace {

enum class Status { Holds, Fails, PreconditionUnmet, Unknown };
enum class Method { KernelReduction, BruteForceOracle };

const char* to_string(Status s);
const char* to_string(Method m);

/// A base member O at level `level` that contains the recurrent point
/// `recurrent` of v and misses the recurrent point `excluded` of u.
struct Witness {
  std::string level;
  Point recurrent = 0;
  std::size_t member = 0;  // index into space.opens()
  Point excluded = 0;

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct Verdict {
  Status status = Status::Holds;
  Method method = Method::KernelReduction;
  std::optional<Witness> witness;
  /// Nets exhibiting a failure, when the failure is not a single approach.
  std::vector<LassoNet> nets;
  std::string detail;

  bool holds() const { return status == Status::Holds; }
};

Verdict approaches(const LassoNet& u, const LassoNet& v, const GradedBase& base);
/// Exhaustive search over per-index neighbourhood selections along one
/// period of v, extended periodically. Tail containment is checked by
/// unrolling u. Exponential in the cycle length of v.
Verdict approaches_oracle(const LassoNet& u, const LassoNet& v, const GradedBase& base);

/// Builds the falsifying selection described by `w` and checks it: along v,
/// every index whose value is w.recurrent gets w.member, and w.excluded
/// recurs in every tail of u.
bool replay_witness(const LassoNet& u, const LassoNet& v, const GradedBase& base, const Witness& w);

Verdict converges(const LassoNet& u, Point x, const GradedBase& base);
PointSet limits(const LassoNet& u, const GradedBase& base);
Verdict is_cauchy(const LassoNet& u, const GradedBase& base);
/// Every B-neighbourhood of x contains a tail of u, checked member by member.
bool converges_by_neighbourhoods(const LassoNet& u, Point x, const GradedBase& base);

struct Classification {
  Verdict lsb, csb, sb;
};
Classification classify_base(const GradedBase& base);

Verdict is_uniform(const SpaceMap& f, const GradedBase& src, const GradedBase& tgt);

/// Point sets with at most 16 points are enumerated exhaustively; larger
/// spaces raise InputError.
Verdict is_complete(const GradedBase& base);
Verdict is_precompact(const GradedBase& base);
Verdict is_compact(const FinSpace& space);
/// Completeness of the subspace on `a` with the trace base.
bool is_complete_subset(const GradedBase& base, PointSet a);

Verdict check_baire(const GradedBase& base);

struct SuiteBounds {
  std::size_t max_prefix = 2;
  std::size_t max_cycle = 2;
  std::size_t binet_rows = 3;
  std::size_t binet_cols = 3;
  std::size_t subnet_max_start = 2;
  std::size_t subnet_max_increment = 2;
  std::size_t subnet_max_cycle = 2;
  /// Upper bound on approach evaluations; 0 means unlimited.
  std::uint64_t budget = 0;
};

struct AxiomResult {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t counterexamples = 0;
  std::vector<std::string> examples;  // first few counterexamples, verbatim
};

struct SuiteReport {
  std::vector<AxiomResult> axioms;
  bool partial = false;
  std::uint64_t nets = 0;

  bool ok() const;
  const AxiomResult& get(std::string_view name) const;
};

using ApproachFn = std::function<bool(const LassoNet&, const LassoNet&, const GradedBase&)>;
bool kernel_approach(const LassoNet& u, const LassoNet& v, const GradedBase& base);

/// All lasso nets on n points within the prefix and cycle bounds, in
/// normalized form without duplicates.
std::vector<LassoNet> enumerate_nets(std::size_t n, std::size_t max_prefix, std::size_t max_cycle);
std::vector<SubnetSpec> enumerate_subnets(const SuiteBounds& b);

/// Axioms 1-4 plus tail exclusion and filter monotonicity, exhaustively
/// within `bounds`. `approach` replaces the decision procedure, which lets
/// tests feed a deliberately broken relation.
SuiteReport run_axiom_suite(const GradedBase& base, const SuiteBounds& bounds, const ApproachFn& approach = kernel_approach);

Verdict cauchy_filter_check(const FinFilter& f, const GradedBase& base, std::size_t samples, std::uint64_t seed = 0);

struct CauchyStructure {
  std::vector<FinFilter> filters;  // every principal filter, by core in canonical order
  std::vector<bool> cauchy;
  std::vector<std::string> violations;
};
/// Throws PreconditionUnmet if the base is not csb.
CauchyStructure cauchy_structure(const GradedBase& base, std::size_t samples = 4, std::uint64_t seed = 0);

std::string format_witness(const GradedBase& base, const Witness& w);

}  // namespace basespace
