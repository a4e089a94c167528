#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sizax/constraint.hpp"
#include "sizax/interpreter.hpp"
#include "sizax/parser.hpp"
#include "sizax/pipeline.hpp"
#include "sizax/ticking.hpp"

using namespace sizax;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Usage, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Common {
  std::string file;
  std::string format = "text";
  unsigned degree = 2;
  unsigned coeffBound = 3;
  std::uint64_t seed = 1;
  std::uint64_t fuel = kDefaultFuel;
  bool strict = false;
  bool freshClock = false;
  bool specialize = false;
  bool joint = false;
  std::vector<std::string> entries;
  std::string interpretation;

  AnalysisOptions options() const {
    AnalysisOptions o;
    o.measure = strict ? SizeMeasure::Strict : SizeMeasure::Natural;
    o.solver.maxDegree = degree;
    o.solver.coefficientBound = coeffBound;
    o.solver.seed = seed;
    o.specialize = specialize;
    o.joint = joint;
    o.tick.freshClock = freshClock;
    o.entries = entries;
    if (!interpretation.empty()) o.interpretation = parse_interpretation(read_file(interpretation));
    return o;
  }
};

void add_solver_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--degree", c.degree, "maximal polynomial degree")->check(CLI::Range(1u, 4u));
  cmd->add_option("--coeff-bound", c.coeffBound, "coefficient bound K (tries 1, K, 2K+1)")->check(CLI::Range(1u, 50u));
  cmd->add_option("--seed", c.seed, "seed for sampling and input generation");
  cmd->add_flag("--joint", c.joint, "solve all constraints as one group");
}

void add_analysis_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("file", c.file, "program file")->required();
  cmd->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--entry", c.entries, "restrict entry points");
  cmd->add_flag("--strict", c.strict, "every constructor weighs one");
  cmd->add_flag("--fresh-clock", c.freshClock, "dedicated clock type instead of Nat");
  cmd->add_flag("--specialize", c.specialize, "clone shared functions per caller when solving fails");
  cmd->add_option("--interpretation", c.interpretation, "file with `F(x1) = ...` lines fixing symbols");
  add_solver_flags(cmd, c);
}

int print_analysis(const Analysis& a, const Common& c, bool certify, const std::vector<std::string>& exprs,
                   bool showTicked, bool showConstraints, bool checking) {
  std::vector<std::pair<std::string, std::string>> typed;
  for (const auto& e : exprs) {
    try {
      typed.push_back({e, to_string(type_expression(a, e))});
    } catch (const Error& err) {
      typed.push_back({e, std::string("error: ") + err.what()});
    }
  }
  if (c.format == "json") {
    nlohmann::json j = json_report(a, certify);
    nlohmann::json ex = nlohmann::json::object();
    for (const auto& [e, t] : typed) ex[e] = t;
    if (!typed.empty()) j["expressions"] = ex;
    if (showConstraints && a.check) j["constraints"] = export_constraints(a.check->constraints);
    if (showTicked && a.runtime && a.runtime->ticked) j["ticked"] = print_program(a.runtime->ticked->program);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text_report(a, certify);
    for (const auto& [e, t] : typed) std::cout << e << " : " << t << "\n";
    if (showConstraints && a.check) std::cout << "constraints:\n" << export_constraints(a.check->constraints);
    if (showTicked && a.runtime && a.runtime->ticked)
      std::cout << "ticked program:\n" << print_program(a.runtime->ticked->program);
  }
  bool exprFailed = std::any_of(typed.begin(), typed.end(), [](const auto& t) { return t.second.rfind("error", 0) == 0; });
  if (exprFailed) return 1;
  return (checking ? a.accepted() : a.complete()) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sizax: sized-type size and runtime analysis"};
  app.require_subcommand(1);

  Common common;
  bool sizeOnly = false, checkMode = false, certify = false, showTicked = false, showConstraints = false;
  std::vector<std::string> exprs;

  auto* analyze = app.add_subcommand("analyze", "infer sized types and runtime bounds");
  add_analysis_flags(analyze, common);
  analyze->add_flag("--size-only", sizeOnly, "skip the runtime analysis");
  analyze->add_flag("--check", checkMode, "accept or reject with the annotations as given");
  analyze->add_flag("--certify", certify, "print the solver certificate");
  analyze->add_flag("--tick", showTicked, "print the ticked program");
  analyze->add_flag("--constraints", showConstraints, "print the generated constraints");
  analyze->add_option("--type", exprs, "also type this closed expression");

  auto* check = app.add_subcommand("check", "check the annotated program (size only)");
  add_analysis_flags(check, common);
  check->add_flag("--certify", certify, "print the solver certificate");
  check->add_flag("--constraints", showConstraints, "print the generated constraints");
  check->add_option("--type", exprs, "also type this closed expression");

  std::string tickFile;
  auto* tick = app.add_subcommand("tick", "print the ticked program");
  tick->add_option("file", tickFile, "program file")->required();
  tick->add_flag("--fresh-clock", common.freshClock, "dedicated clock type instead of Nat");

  std::string constraintFile;
  auto* solveCmd = app.add_subcommand("solve", "solve an exported constraint file");
  solveCmd->add_option("file", constraintFile, "constraint file")->required();
  solveCmd->add_flag("--certify", certify, "print the certificate");
  solveCmd->add_option("--format", common.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  add_solver_flags(solveCmd, common);

  std::string runFile, runEntry;
  std::vector<std::string> runArgs;
  bool runTicked = false;
  auto* run = app.add_subcommand("run", "evaluate a function on literal arguments");
  run->add_option("file", runFile, "program file")->required();
  run->add_option("entry", runEntry, "function")->required();
  // Literal arguments are taken from the extras: an option would unpack
  // `[1,2]` as its own list syntax.
  run->allow_extras();
  run->add_option("--fuel", common.fuel, "maximal number of equation firings");
  run->add_flag("--ticked", runTicked, "run the ticked program with a zero clock");
  run->add_flag("--strict", common.strict, "every constructor weighs one");

  unsigned budget = 15;
  auto* validateCmd = app.add_subcommand("validate", "compare bounds with observed sizes and steps");
  add_analysis_flags(validateCmd, common);
  validateCmd->add_option("--budget", budget, "maximal input size");
  validateCmd->add_option("--fuel", common.fuel, "maximal number of equation firings");
  validateCmd->add_flag("--size-only", sizeOnly, "skip the runtime analysis");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze || *check) {
      AnalysisOptions o = common.options();
      o.sizeOnly = sizeOnly || *check;
      o.check = checkMode || *check;
      Analysis a = sizax::analyze(read_file(common.file), o, common.file);
      return print_analysis(a, common, certify, exprs, showTicked, showConstraints, o.check);
    }
    if (*tick) {
      TickConfig cfg;
      cfg.freshClock = common.freshClock;
      std::cout << print_program(tick_program(load_program(read_file(tickFile)), cfg).program);
      return 0;
    }
    if (*solveCmd) {
      ConstraintSet cs = import_constraints(read_file(constraintFile));
      SolverConfig cfg = default_solver_config();
      cfg.maxDegree = common.degree;
      cfg.coefficientBound = common.coeffBound;
      cfg.seed = common.seed;
      SolveResult r = common.joint ? solve_joint(cs, cfg) : solve(cs, cfg);
      if (common.format == "json") {
        nlohmann::json j;
        j["status"] = to_string(r.status);
        nlohmann::json interp = nlohmann::json::object();
        for (const auto& [s, si] : r.interpretation.table()) interp[s] = to_string(si.poly);
        j["interpretation"] = interp;
        if (certify && r.verification) {
          nlohmann::json cert = nlohmann::json::array();
          for (const auto& e : r.verification->certificate)
            cert.push_back({{"constraint", e.constraint.str()}, {"difference", to_string(e.difference)}});
          j["certificate"] = cert;
        }
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << to_string(r.status) << "\n" << r.interpretation.str();
        if (certify && r.verification)
          for (const auto& e : r.verification->certificate)
            std::cout << e.constraint.str() << "  [rhs - lhs = " << to_string(e.difference) << "]\n";
      }
      return r.sat() ? 0 : 1;
    }
    if (*run) {
      Program p = load_program(read_file(runFile));
      SizeMeasure m = common.strict ? SizeMeasure::Strict : SizeMeasure::Natural;
      std::vector<ValuePtr> args;
      runArgs = run->remaining();
      for (const auto& s : runArgs)
        if (s.starts_with("--")) return run->exit(CLI::ExtrasError({s}));
      for (const auto& s : runArgs) args.push_back(to_value(parse_value(s, p)));
      if (runTicked) {
        TickedProgram tp = tick_program(p);
        args.push_back(Value::data(tp.clock.zero));
        EvalResult r = call(tp.program, ticked_name(runEntry), args, common.fuel);
        if (r.status == EvalStatus::FuelExhausted) {
          std::cout << "fuel exhausted after " << r.steps << " steps\n";
          return 1;
        }
        std::cout << "value: " << to_string(r.value) << "\n";
        if (r.value->args.size() == 2) std::cout << "clock: " << size(tp.program, r.value->args[1]) << "\n";
        return 0;
      }
      EvalResult r = call(p, runEntry, args, common.fuel);
      if (r.status == EvalStatus::FuelExhausted) {
        std::cout << "fuel exhausted after " << r.steps << " steps\n";
        return 1;
      }
      std::cout << "value: " << to_string(r.value) << "\n" << "steps: " << r.steps << "\n";
      std::cout << "argument sizes:";
      for (const auto& a : args) {
        try {
          std::cout << " " << size(p, a, m);
        } catch (const Error&) {
          std::cout << " -";
        }
      }
      std::cout << "\n";
      try {
        std::cout << "size: " << size(p, r.value, m) << "\n";
      } catch (const Error&) {
        std::cout << "size: -\n";
      }
      return 0;
    }
    if (*validateCmd) {
      AnalysisOptions o = common.options();
      o.sizeOnly = sizeOnly;
      Analysis a = sizax::analyze(read_file(common.file), o, common.file);
      if (!a.diagnostics.empty()) {
        std::cout << text_report(a);
        return 1;
      }
      Validation v = validate(a, budget, common.seed, common.fuel);
      if (common.format == "json")
        std::cout << json_report(v).dump(2) << "\n";
      else
        std::cout << text_report(v);
      return v.ok() ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return 2;
  }
  return 0;
}
