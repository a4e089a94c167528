#pragma once

#include <string>
#include <vector>

#include "sizax/ast.hpp"

namespace sizax {

struct Diagnostic {
  ErrorKind kind = ErrorKind::WellFormedness;
  std::string message;
  SourceLoc loc;

  std::string str() const;
};

// Constant arity, linear left-hand sides, bound right-hand side variables,
// saturated constructor patterns and pairwise non-overlapping equations.
std::vector<Diagnostic> check_wellformed(const Program& p);

// Throws the first diagnostic of check_wellformed, if any.
void require_wellformed(const Program& p);

// Monomorphic simple typing by unification. Fills in missing signatures and
// annotates every term and pattern node with its type; throws TypeMismatch.
void simple_typecheck(Program& p);

// Do two linear patterns have a common instance?
bool patterns_unify(const Pattern& a, const Pattern& b);

// Functions called from the right-hand sides of `f`, in first-occurrence order.
std::vector<std::string> callees(const FunctionDef& f);

// Strongly connected components of the call graph, callees before callers.
std::vector<std::vector<std::string>> call_graph_sccs(const Program& p);

}  // namespace sizax
