#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sizax/ast.hpp"
#include "sizax/interpreter.hpp"
#include "sizax/solver.hpp"
#include "sizax/ticking.hpp"
#include "sizax/typecheck.hpp"

namespace sizax {

struct AnalysisOptions {
  SizeMeasure measure = SizeMeasure::Natural;
  SolverConfig solver = default_solver_config();
  bool sizeOnly = false;    // skip the ticked runtime analysis
  bool check = false;       // accept/reject with the annotations as given
  bool specialize = false;  // clone shared functions when solving fails
  bool joint = false;       // one solver group for everything
  TickConfig tick;
  std::vector<std::string> entries;             // restricts entry points
  std::optional<Interpretation> interpretation;  // user-supplied symbols
};

// Parse, well-formedness and simple typing.
Program load_program(const std::string& source);

// Substitutes interpreted symbols and normalizes the affected indices.
IndexTerm interpret_index(const IndexTerm& t, const Interpretation& interp);
SizedType interpret_type(const SizedType& t, const Interpretation& interp);

// One clone of a shared function's call-graph component per additional
// calling function, so each caller gets its own template.
Program specialize(const Program& p);

struct FunctionReport {
  std::string name;
  SimpleType simple;
  SizedType declared;  // annotation or template
  bool annotated = false;
  bool lifted = false;
  bool entry = false;
  std::optional<SizedType> inferred;  // declared with the solution substituted
  std::optional<IndexTerm> runtime;   // in the argument size variables of `inferred`
  std::string runtimeNote;
};

struct RuntimeAnalysis {
  std::optional<TickedProgram> ticked;
  std::optional<Declarations> decls;
  std::optional<CheckResult> check;
  std::optional<SolveResult> solve;
  std::string error;
};

struct Analysis {
  std::string file;
  Program program;
  AnalysisOptions options;
  std::optional<Declarations> decls;
  std::optional<CheckResult> check;
  std::optional<SolveResult> solve;
  std::vector<std::vector<std::string>> sccs;
  std::vector<FunctionReport> functions;
  std::optional<RuntimeAnalysis> runtime;
  std::vector<Diagnostic> diagnostics;
  bool specialized = false;
  double seconds = 0;

  // No diagnostics and every constraint discharged.
  bool accepted() const;
  // Every entry point received a size bound (and a runtime bound unless
  // size-only).
  bool complete() const;
  const FunctionReport* function(const std::string& name) const;
};

// Never throws for errors in the program; they end up as diagnostics.
Analysis analyze(const std::string& source, const AnalysisOptions& options = {}, const std::string& file = "");
Analysis analyze_program(Program p, const AnalysisOptions& options = {});

// Sized type of a closed expression over the analysed program, with its
// own fallback symbols solved.
SizedType type_expression(const Analysis& a, const std::string& expression);

struct ValidationEntry {
  std::string function;
  size_t inputs = 0;
  size_t sizeViolations = 0;
  size_t runtimeViolations = 0;
  size_t clockMismatches = 0;
  size_t inconclusive = 0;
  std::map<unsigned, std::int64_t> sizeSlack;     // total input size -> min slack
  std::map<unsigned, std::int64_t> runtimeSlack;  // same for the runtime bound
  std::vector<std::string> failures;              // first few, human readable

  bool ok() const { return sizeViolations == 0 && runtimeViolations == 0 && clockMismatches == 0; }
};

struct Validation {
  std::vector<ValidationEntry> entries;
  bool ok() const;
};

// Runs the entry points on generated inputs within the size budget: output
// size against the size bound, steps against the runtime bound, and the
// ticked program's clock against the step count.
Validation validate(const Analysis& a, unsigned budget, std::uint64_t seed = 1, std::uint64_t fuel = kDefaultFuel);

std::string text_report(const Analysis& a, bool certify = false);
nlohmann::json json_report(const Analysis& a, bool certify = false);
std::string text_report(const Validation& v);
nlohmann::json json_report(const Validation& v);

// `F1(x1,x2) = x1 + x2` lines.
Interpretation parse_interpretation(const std::string& text);

}  // namespace sizax
