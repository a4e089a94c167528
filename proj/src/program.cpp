#include "sizax/program.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace sizax {

std::string Diagnostic::str() const {
  std::string out = to_string(kind);
  if (loc.valid()) out += " at " + loc.str();
  return out + ": " + message;
}

bool patterns_unify(const Pattern& a, const Pattern& b) {
  if (a.kind == Pattern::Kind::Var || b.kind == Pattern::Kind::Var) return true;
  if (a.name != b.name || a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!patterns_unify(a.args[i], b.args[i])) return false;
  return true;
}

namespace {

void check_pattern(const Program& p, const Pattern& pat, std::vector<Diagnostic>& out) {
  if (pat.kind == Pattern::Kind::Var) return;
  if (!p.is_constructor(pat.name)) {
    out.push_back({ErrorKind::UnknownIdentifier, "unknown constructor " + pat.name + " in pattern", pat.loc});
    return;
  }
  size_t arity = p.constructor_arity(pat.name);
  if (arity != pat.args.size())
    out.push_back({ErrorKind::WellFormedness,
                   "constructor " + pat.name + " expects " + std::to_string(arity) + " arguments in a pattern, got " +
                       std::to_string(pat.args.size()),
                   pat.loc});
  for (const auto& a : pat.args) check_pattern(p, a, out);
}

}  // namespace

std::vector<Diagnostic> check_wellformed(const Program& p) {
  std::vector<Diagnostic> out;
  for (const auto& f : p.functions) {
    if (f.equations.empty()) {
      out.push_back({ErrorKind::WellFormedness, "function " + f.name + " has no equations", f.loc});
      continue;
    }
    size_t arity = f.arity();
    for (const auto& eq : f.equations) {
      if (eq.lhs.size() != arity)
        out.push_back({ErrorKind::ArityMismatch,
                       "equation for " + f.name + " has " + std::to_string(eq.lhs.size()) +
                           " patterns, the first equation has " + std::to_string(arity),
                       eq.loc});
      std::vector<std::string> vars = eq.lhs_vars();
      std::set<std::string> seen;
      for (const auto& v : vars)
        if (!seen.insert(v).second)
          out.push_back({ErrorKind::WellFormedness, "variable " + v + " occurs more than once on the left-hand side",
                         eq.loc});
      for (const auto& v : term_vars(eq.rhs))
        if (!seen.count(v))
          out.push_back({ErrorKind::WellFormedness, "variable " + v + " is not bound by the left-hand side", eq.loc});
      for (const auto& pat : eq.lhs) check_pattern(p, pat, out);
    }
    for (size_t a = 0; a < f.equations.size(); ++a) {
      for (size_t b = a + 1; b < f.equations.size(); ++b) {
        const auto& ea = f.equations[a];
        const auto& eb = f.equations[b];
        if (ea.lhs.size() != eb.lhs.size()) continue;
        bool overlap = true;
        for (size_t k = 0; k < ea.lhs.size() && overlap; ++k) overlap = patterns_unify(ea.lhs[k], eb.lhs[k]);
        if (overlap)
          out.push_back({ErrorKind::WellFormedness,
                         "equations for " + f.name + " at lines " + std::to_string(ea.loc.line) + " and " +
                             std::to_string(eb.loc.line) + " overlap",
                         eb.loc});
      }
    }
  }
  return out;
}

void require_wellformed(const Program& p) {
  auto diags = check_wellformed(p);
  if (!diags.empty()) throw Error(diags.front().kind, diags.front().message, diags.front().loc);
}

std::vector<std::string> callees(const FunctionDef& f) {
  std::vector<std::string> out;
  std::function<void(const TermPtr&)> walk = [&](const TermPtr& t) {
    if (t->is_app()) {
      walk(t->fn);
      walk(t->arg);
    } else if (t->kind == Term::Kind::Fun && std::find(out.begin(), out.end(), t->name) == out.end()) {
      out.push_back(t->name);
    }
  };
  for (const auto& eq : f.equations) walk(eq.rhs);
  return out;
}

std::vector<std::vector<std::string>> call_graph_sccs(const Program& p) {
  std::map<std::string, std::vector<std::string>> edges;
  for (const auto& f : p.functions) edges[f.name] = callees(f);

  std::map<std::string, int> index, low;
  std::set<std::string> onStack;
  std::vector<std::string> stack;
  std::vector<std::vector<std::string>> sccs;
  int counter = 0;

  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    onStack.insert(v);
    for (const auto& w : edges[v]) {
      if (!edges.count(w)) continue;
      if (!index.count(w)) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (onStack.count(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> scc;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        onStack.erase(w);
        scc.push_back(w);
      } while (w != v);
      // Program order inside a component.
      std::vector<std::string> ordered;
      for (const auto& f : p.functions)
        if (std::find(scc.begin(), scc.end(), f.name) != scc.end()) ordered.push_back(f.name);
      sccs.push_back(ordered);
    }
  };
  for (const auto& f : p.functions)
    if (!index.count(f.name)) visit(f.name);
  return sccs;
}

}  // namespace sizax
