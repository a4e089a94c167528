#include "sizax/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "sizax/parser.hpp"
#include "sizax/program.hpp"

namespace sizax {

Program load_program(const std::string& source) {
  Program p = parse_program(source);
  require_wellformed(p);
  simple_typecheck(p);
  return p;
}

IndexTerm interpret_index(const IndexTerm& t, const Interpretation& interp) {
  if (!t.mentions_symbol()) return t;
  return from_polynomial(to_polynomial(t, interp));
}

SizedType interpret_type(const SizedType& t, const Interpretation& interp) {
  return map_indices(t, [&](const IndexTerm& i) { return interpret_index(i, interp); });
}

// ---- specialization ----

namespace {

TermPtr rename_calls(const TermPtr& t, const std::map<std::string, std::string>& renaming) {
  switch (t->kind) {
    case Term::Kind::Fun:
      if (auto it = renaming.find(t->name); it != renaming.end()) return Term::fun(it->second, t->loc, t->type);
      return t;
    case Term::Kind::App:
      return Term::app(rename_calls(t->fn, renaming), rename_calls(t->arg, renaming), t->loc, t->type);
    default: return t;
  }
}

void rename_in(FunctionDef& f, const std::map<std::string, std::string>& renaming) {
  for (auto& eq : f.equations) eq.rhs = rename_calls(eq.rhs, renaming);
}

}  // namespace

Program specialize(const Program& p) {
  auto sccs = call_graph_sccs(p);
  std::map<std::string, size_t> component;
  for (size_t k = 0; k < sccs.size(); ++k)
    for (const auto& f : sccs[k]) component[f] = k;
  std::vector<std::vector<std::string>> callers(sccs.size());
  for (const auto& h : p.functions)
    for (const auto& g : callees(h)) {
      size_t k = component.at(g);
      if (k != component.at(h.name) && std::find(callers[k].begin(), callers[k].end(), h.name) == callers[k].end())
        callers[k].push_back(h.name);
    }
  Program q = p;
  for (size_t k = 0; k < sccs.size(); ++k) {
    bool annotated = std::any_of(sccs[k].begin(), sccs[k].end(), [&](const std::string& f) { return p.find(f)->sized; });
    if (annotated || callers[k].size() < 2) continue;
    for (size_t c = 1; c < callers[k].size(); ++c) {
      std::map<std::string, std::string> renaming;
      for (const auto& f : sccs[k]) {
        std::string name = f + "_s" + std::to_string(c);
        while (q.find(name)) name += "'";
        renaming[f] = name;
      }
      for (const auto& f : sccs[k]) {
        FunctionDef clone = *p.find(f);
        clone.name = renaming[f];
        for (auto& eq : clone.equations) eq.fun = clone.name;
        rename_in(clone, renaming);
        clone.lifted = true;
        q.functions.push_back(std::move(clone));
      }
      rename_in(*q.find(callers[k][c]), renaming);
    }
  }
  q.typed = false;
  simple_typecheck(q);
  return q;
}

// ---- analysis ----

namespace {

using Clock = std::chrono::steady_clock;

std::set<std::string> symbols_in(const SizedType& t) {
  std::map<std::string, size_t> syms;
  map_indices(t, [&](const IndexTerm& i) {
    i.collect_symbols(syms);
    return i;
  });
  std::set<std::string> out;
  for (const auto& [s, _] : syms) out.insert(s);
  return out;
}

std::map<std::string, int> symbol_ranks(const Program& p, const ConstraintSet& cs) {
  std::map<std::string, int> fnRank;
  auto sccs = call_graph_sccs(p);
  for (size_t k = 0; k < sccs.size(); ++k)
    for (const auto& f : sccs[k]) fnRank[f] = static_cast<int>(k);
  std::map<std::string, int> rank;
  for (const auto& [sym, owner] : cs.owners())
    if (auto it = fnRank.find(owner); it != fnRank.end()) rank[sym] = it->second;
  return rank;
}

// Functions named in diagnostics ("f: message").
std::set<std::string> blamed(const std::vector<Diagnostic>& ds) {
  std::set<std::string> out;
  for (const auto& d : ds)
    if (auto colon = d.message.find(": "); colon != std::string::npos) out.insert(d.message.substr(0, colon));
  return out;
}

// Types whose symbols are all interpreted, where every constraint of the
// function and of its transitive callees is covered by the interpretation
// and verifies.
std::map<std::string, SizedType> certified_types(const Program& p, const Declarations& decls, const CheckResult& check,
                                                 const SolveResult& solved, const SolverConfig& cfg) {
  const Interpretation& interp = solved.interpretation;
  std::set<std::string> uncovered;  // functions with a constraint the interpretation leaves open
  bool verified = true;
  if (!solved.sat()) {
    std::vector<Constraint> covered;
    for (const auto& c : check.constraints.constraints()) {
      std::map<std::string, size_t> syms;
      c.lhs.collect_symbols(syms);
      c.rhs.collect_symbols(syms);
      if (std::all_of(syms.begin(), syms.end(), [&](const auto& s) { return interp.contains(s.first); }))
        covered.push_back(c);
      else
        uncovered.insert(c.origin.function);
    }
    verified = verify(interp, covered, cfg).ok();
  }
  if (!verified) return {};
  std::set<std::string> bad = blamed(check.diagnostics);
  bad.insert(uncovered.begin(), uncovered.end());
  std::map<std::string, SizedType> out;
  for (const auto& f : p.functions) {
    std::set<std::string> reach = {f.name};
    std::vector<std::string> todo = {f.name};
    while (!todo.empty()) {
      std::string g = todo.back();
      todo.pop_back();
      for (const auto& h : callees(*p.find(g)))
        if (reach.insert(h).second) todo.push_back(h);
    }
    if (std::any_of(reach.begin(), reach.end(), [&](const std::string& g) { return bad.count(g) > 0; })) continue;
    const SizedType& t = decls.at(f.name);
    auto syms = symbols_in(t);
    if (std::all_of(syms.begin(), syms.end(), [&](const std::string& s) { return interp.contains(s); }))
      out.emplace(f.name, interpret_type(t, interp));
  }
  return out;
}

// Index variables of the top-level base-typed arguments, positionally.
std::vector<std::optional<std::string>> argument_variables(const SizedType& t) {
  std::vector<std::optional<std::string>> out;
  SizedType cur = t;
  while (true) {
    while (cur.is_forall()) cur = cur.body();
    if (!cur.is_arrow()) break;
    SizedType d = cur.dom();
    if (d.is_base() && d.index.kind == IndexTerm::Kind::Var)
      out.push_back(d.index.name);
    else
      out.push_back(std::nullopt);
    cur = cur.cod();
  }
  return out;
}

SolveResult run_solver(const Program& p, const CheckResult& check, const AnalysisOptions& opts) {
  Interpretation fixed = opts.interpretation.value_or(Interpretation{});
  if (opts.joint) return solve_joint(check.constraints, opts.solver, fixed);
  return solve(check.constraints, opts.solver, fixed, symbol_ranks(p, check.constraints));
}

void runtime_analysis(Analysis& a) {
  RuntimeAnalysis ra;
  try {
    ra.ticked = tick_program(a.program, a.options.tick);
    ra.decls = generate_templates(ra.ticked->program, a.options.measure);
    ra.check = check_program(ra.ticked->program, *ra.decls);
    ra.solve = run_solver(ra.ticked->program, *ra.check, a.options);
    auto types = certified_types(ra.ticked->program, *ra.decls, *ra.check, *ra.solve, a.options.solver);
    for (auto& fr : a.functions) {
      auto it = types.find(ticked_name(fr.name));
      if (it == types.end()) {
        fr.runtimeNote = "no certified runtime bound";
        continue;
      }
      auto bound = clock_bound(it->second);
      if (!bound) {
        fr.runtimeNote = "clock not found in " + to_string(it->second);
        continue;
      }
      // Use the argument variable names of the size type.
      IndexSubstitution theta;
      if (fr.inferred) {
        auto from = argument_variables(it->second);
        auto to = argument_variables(*fr.inferred);
        for (size_t i = 0; i < from.size() && i < to.size(); ++i)
          if (from[i] && to[i]) theta[*from[i]] = IndexTerm::var(*to[i]);
      }
      fr.runtime = from_polynomial(to_polynomial(substitute(*bound, theta), Interpretation{}));
    }
  } catch (const Error& e) {
    ra.error = e.what();
    for (auto& fr : a.functions)
      if (fr.runtimeNote.empty()) fr.runtimeNote = ra.error;
  }
  a.runtime = std::move(ra);
}

}  // namespace

bool Analysis::accepted() const {
  return diagnostics.empty() && solve && solve->sat() && solve->verification && solve->verification->ok();
}

bool Analysis::complete() const {
  bool any = false;
  for (const auto& f : functions) {
    if (!f.entry) continue;
    any = true;
    if (!f.inferred) return false;
    if (!options.sizeOnly && !f.runtime) return false;
  }
  return any && diagnostics.empty();
}

const FunctionReport* Analysis::function(const std::string& name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

Analysis analyze(const std::string& source, const AnalysisOptions& options, const std::string& file) {
  Analysis a;
  try {
    a = analyze_program(load_program(source), options);
  } catch (const Error& e) {
    a.options = options;
    a.diagnostics.push_back({e.kind(), e.what(), e.loc()});
  }
  a.file = file;
  return a;
}

Analysis analyze_program(Program p, const AnalysisOptions& options) {
  auto start = Clock::now();
  Analysis a;
  a.program = std::move(p);
  a.options = options;
  a.sccs = call_graph_sccs(a.program);
  try {
    a.decls = generate_templates(a.program, options.measure);
  } catch (const Error& e) {
    a.diagnostics.push_back({e.kind(), e.what(), e.loc()});
    return a;
  }
  a.check = check_program(a.program, *a.decls);
  a.diagnostics = a.check->diagnostics;
  a.solve = run_solver(a.program, *a.check, options);

  if (!a.solve->sat() && options.specialize) {
    Program q = specialize(a.program);
    if (q.functions.size() != a.program.functions.size()) {
      AnalysisOptions again = options;
      again.specialize = false;
      Analysis b = analyze_program(std::move(q), again);
      b.options.specialize = true;
      b.specialized = true;
      b.seconds += std::chrono::duration<double>(Clock::now() - start).count();
      return b;
    }
  }

  auto types = certified_types(a.program, *a.decls, *a.check, *a.solve, options.solver);
  for (const auto& f : a.program.functions) {
    FunctionReport fr;
    fr.name = f.name;
    fr.simple = *f.signature;
    fr.declared = a.decls->at(f.name);
    fr.annotated = !a.decls->templated.count(f.name);
    fr.lifted = f.lifted;
    fr.entry = !f.lifted && first_order_signature(f).has_value() &&
               (options.entries.empty() ||
                std::find(options.entries.begin(), options.entries.end(), f.name) != options.entries.end());
    if (auto it = types.find(f.name); it != types.end()) fr.inferred = it->second;
    a.functions.push_back(std::move(fr));
  }
  for (const auto& e : options.entries)
    if (!a.function(e)) a.diagnostics.push_back({ErrorKind::Usage, "no function named " + e, {}});
  if (!options.sizeOnly) runtime_analysis(a);
  a.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return a;
}

SizedType type_expression(const Analysis& a, const std::string& expression) {
  if (!a.decls || !a.solve) throw Error(ErrorKind::Usage, "the program was not analysed");
  Program q = a.program;
  TermPtr term = parse_expression(expression, q);
  FunctionDef it;
  it.name = "it#";
  it.equations.push_back(Equation{it.name, {}, term, {}});
  q.functions.push_back(it);
  q.typed = false;
  simple_typecheck(q);
  TermPtr typed = q.find(it.name)->equations.front().rhs;

  Declarations decls = *a.decls;
  for (auto& [name, type] : decls.functions) {
    auto syms = symbols_in(type);
    if (std::all_of(syms.begin(), syms.end(), [&](const std::string& s) { return a.solve->interpretation.contains(s); }))
      type = interpret_type(type, a.solve->interpretation);
  }
  Checker checker(q, decls);
  ConstraintSet out;
  SizedType t = checker.infer(typed, {}, out, it.name);
  SolveResult r = solve(out, a.options.solver, a.solve->interpretation);
  if (!r.sat()) throw Error(ErrorKind::Unsolved, "no sized type found for " + expression);
  // Ground arithmetic from numerals is folded as well.
  return map_indices(t, [&](const IndexTerm& i) { return from_polynomial(to_polynomial(i, r.interpretation)); });
}

}  // namespace sizax
