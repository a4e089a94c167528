#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sizax/ast.hpp"
#include "sizax/constraint.hpp"
#include "sizax/program.hpp"
#include "sizax/sized_type.hpp"
#include "sizax/subtyping.hpp"

namespace sizax {

// How constructor applications are measured. Natural: nullary constructors
// weigh 0, others 1 plus their recursive arguments (a list's size is its
// length). Strict: every constructor weighs 1.
enum class SizeMeasure { Natural, Strict };

// Additive declaration of a constructor whose result has simple type
// `result`. Recursive arguments get distinct variables summed in the
// result; other arguments get fresh variables that the result ignores.
SizedType constructor_declaration(const Program& p, const std::string& con, const SimpleType& result,
                                  SizeMeasure measure = SizeMeasure::Natural);

// Hands out unknown symbol names F1, F2, ... and J1, J2, ...
class SymbolSupply {
public:
  std::string template_symbol() { return "F" + std::to_string(++templates_); }
  std::string fallback_symbol() { return "J" + std::to_string(++fallbacks_); }

private:
  int templates_ = 0;
  int fallbacks_ = 0;
};

struct UnknownSymbol {
  std::string name;
  size_t arity = 0;
  std::string owner;
};

struct Declarations {
  std::map<std::string, SizedType> functions;
  std::set<std::string> templated;  // declarations built by generate_templates
  std::vector<UnknownSymbol> symbols;
  SymbolSupply supply;
  SizeMeasure measure = SizeMeasure::Natural;

  const SizedType& at(const std::string& f) const;
};

// Canonical template over a simple type; positive positions get fresh
// symbols. Throws UnsupportedRank for functional arguments of functional
// arguments.
SizedType generate_template(const SimpleType& type, SymbolSupply& supply, std::vector<UnknownSymbol>& symbols,
                            const std::string& owner = "");

// User declarations where present, templates elsewhere. Requires a typed
// program; throws SkeletonMismatch when an annotation disagrees with the
// simple signature.
Declarations generate_templates(const Program& p, SizeMeasure measure = SizeMeasure::Natural);

using Context = std::map<std::string, SizedType>;

struct Footprint {
  Context context;
  SizedType type;
  std::vector<std::string> variables;  // free index variables, first occurrence order
};

Footprint footprint(const Program& p, const Declarations& decls, const Equation& eq, NameSupply& names);

struct CheckResult {
  ConstraintSet constraints;
  std::vector<Diagnostic> diagnostics;
  std::vector<Diagnostic> warnings;  // do not affect acceptance

  bool ok() const { return diagnostics.empty(); }
};

class Checker {
public:
  Checker(const Program& p, Declarations& decls);

  // Constraints of one equation; fallback symbols are registered in decls.
  ConstraintSet check_equation(const FunctionDef& f, const Equation& eq);

  // Every equation, constraints tagged with the SCC index of the defining
  // function (callees first). Symbol-free constraints are decided on the
  // spot; refuted ones become SubtypeFailure diagnostics.
  CheckResult check_program();

  // Type of a term in a context; leftover constraints go to `out`.
  SizedType infer(const TermPtr& t, const Context& ctx, ConstraintSet& out, const std::string& owner = "");

private:
  SizedType infer_spine(const TermPtr& t, const Context& ctx, Instantiation& inst, int level,
                        const std::string& owner);
  void collect(Instantiation& inst, ConstraintSet& out, const std::string& owner);

  const Program& p_;
  Declarations& decls_;
  std::set<std::string> reserved_;
  std::vector<Diagnostic> warnings_;
};

// Generate constraints for the whole program.
CheckResult check_program(const Program& p, Declarations& decls);

}  // namespace sizax
