#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sizax/constraint.hpp"
#include "sizax/index.hpp"
#include "sizax/polynomial.hpp"
#include "sizax/sized_type.hpp"

namespace sizax {

struct SolverConfig {
  unsigned maxDegree = 2;
  unsigned coefficientBound = 3;  // escalates 1, K, 2K+1
  std::chrono::milliseconds timeoutPerGroup{10000};
  unsigned samples = 1000;
  std::uint64_t seed = 1;

  // The bounds tried in order.
  std::vector<unsigned> bound_schedule() const;
};

// Reads SIZAX_TIMEOUT (milliseconds) when set.
SolverConfig default_solver_config();

struct ConstraintGroup {
  std::vector<std::string> symbols;  // unknowns solved here
  std::vector<size_t> constraints;   // indices into the set
};

// Groups in dependency order (symbols depended upon come first); the
// optional rank orders independent groups, lower first. Symbol-free
// constraints form a leading group without symbols.
std::vector<ConstraintGroup> partition(const ConstraintSet& cs, const std::map<std::string, int>& rank = {});

enum class SolveStatus { Sat, Unsat, Timeout, Skipped };
const char* to_string(SolveStatus s);

struct GroupOutcome {
  SolveStatus status = SolveStatus::Unsat;
  Interpretation solution;  // only the group's own symbols
  unsigned degree = 0;
  unsigned bound = 0;
  std::uint64_t nodes = 0;
};

GroupOutcome solve_group(const std::vector<Constraint>& constraints, const std::vector<std::string>& unknowns,
                         const std::map<std::string, size_t>& arities, const Interpretation& solved,
                         const SolverConfig& cfg);

struct CertificateEntry {
  Constraint constraint;
  Polynomial difference;  // rhs - lhs, every coefficient >= 0
};

struct Verification {
  enum class Status { Certified, Refuted, Unverified };
  Status status = Status::Certified;
  std::vector<CertificateEntry> certificate;
  std::optional<Constraint> failing;
  std::optional<Refutation> counterexample;

  bool ok() const { return status == Status::Certified; }
};

Verification verify(const Interpretation& interp, const ConstraintSet& cs, const SolverConfig& cfg = {});
Verification verify(const Interpretation& interp, const std::vector<Constraint>& cs, const SolverConfig& cfg = {});

struct GroupReport {
  ConstraintGroup group;
  GroupOutcome outcome;
  double seconds = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Sat;
  Interpretation interpretation;  // includes `fixed`
  std::vector<GroupReport> groups;  // in the order they were touched
  std::optional<Verification> verification;

  bool sat() const { return status == SolveStatus::Sat; }
};

// Per-group solving in partition order; every Sat answer is re-verified.
// Symbols interpreted by `fixed` are not unknowns.
SolveResult solve(const ConstraintSet& cs, const SolverConfig& cfg = default_solver_config(),
                  const Interpretation& fixed = {}, const std::map<std::string, int>& rank = {});

// All unknowns in a single group.
SolveResult solve_joint(const ConstraintSet& cs, const SolverConfig& cfg = default_solver_config(),
                        const Interpretation& fixed = {});

// Semantic subtyping under an interpretation: the constraints of
// subtype_constraints must all hold, where fallback symbols introduced for
// unmatched quantifiers may be chosen freely. Throws SkeletonMismatch.
Verdict subtype_semantic(const Interpretation& interp, const SizedType& sub, const SizedType& sup,
                         const SolverConfig& cfg = default_solver_config());

}  // namespace sizax
