#include <algorithm>
#include <sstream>

#include "sizax/parser.hpp"
#include "sizax/pipeline.hpp"

namespace sizax {

// ---- validation ----

namespace {

Assignment sizes_of(const SizedType& type, const InputTuple& in) {
  Assignment alpha;
  SizedType cur = type;
  size_t i = 0;
  while (i < in.sizes.size()) {
    while (cur.is_forall()) cur = cur.body();
    if (!cur.is_arrow()) break;
    SizedType d = cur.dom();
    if (d.is_base() && d.index.kind == IndexTerm::Kind::Var) alpha.values[d.index.name] = in.sizes[i];
    cur = cur.cod();
    ++i;
  }
  return alpha;
}

IndexTerm result_index(const SizedType& type) {
  SizedType cur = type;
  while (true) {
    while (cur.is_forall()) cur = cur.body();
    if (!cur.is_arrow()) break;
    cur = cur.cod();
  }
  if (!cur.is_base()) throw Error(ErrorKind::Unsupported, "result is not an indexed base type");
  return cur.index;
}

std::string show_input(const InputTuple& in) {
  std::string s;
  for (const auto& v : in.args) s += (s.empty() ? "" : " ") + ("(" + to_string(v) + ")");
  return s;
}

void note(ValidationEntry& e, const std::string& msg) {
  if (e.failures.size() < 5) e.failures.push_back(msg);
}

void slack(std::map<unsigned, std::int64_t>& table, unsigned size, std::int64_t value) {
  auto it = table.find(size);
  if (it == table.end() || value < it->second) table[size] = value;
}

}  // namespace

bool Validation::ok() const {
  return std::all_of(entries.begin(), entries.end(), [](const ValidationEntry& e) { return e.ok(); });
}

Validation validate(const Analysis& a, unsigned budget, std::uint64_t seed, std::uint64_t fuel) {
  Validation v;
  const Interpretation empty;
  const Interpretation& interp = a.solve ? a.solve->interpretation : empty;
  SizeMeasure measure = a.options.measure;
  for (const auto& fr : a.functions) {
    if (!fr.entry || !fr.inferred) continue;
    const FunctionDef& f = *a.program.find(fr.name);
    auto sig = first_order_signature(f);
    ValidationEntry e;
    e.function = fr.name;
    IndexTerm bound = result_index(*fr.inferred);
    for (const auto& in : generate_inputs(a.program, sig->first, budget, seed, measure)) {
      ++e.inputs;
      unsigned total = 0;
      for (unsigned s : in.sizes) total += s;
      Assignment alpha = sizes_of(*fr.inferred, in);
      EvalResult r;
      try {
        r = call(a.program, f.name, in.args, fuel);
      } catch (const Error& err) {
        ++e.inconclusive;
        note(e, f.name + " " + show_input(in) + ": " + err.what());
        continue;
      }
      if (r.status != EvalStatus::Finished) {
        ++e.inconclusive;
        note(e, f.name + " " + show_input(in) + ": fuel exhausted");
        continue;
      }
      auto observed = static_cast<std::int64_t>(size(a.program, r.value, measure));
      auto predicted = static_cast<std::int64_t>(evaluate(bound, interp, alpha));
      slack(e.sizeSlack, total, predicted - observed);
      if (observed > predicted) {
        ++e.sizeViolations;
        note(e, f.name + " " + show_input(in) + ": size " + std::to_string(observed) + " > bound " +
                    std::to_string(predicted));
      }
      if (fr.runtime) {
        auto steps = static_cast<std::int64_t>(r.steps);
        auto limit = static_cast<std::int64_t>(evaluate(*fr.runtime, interp, alpha));
        slack(e.runtimeSlack, total, limit - steps);
        if (steps > limit) {
          ++e.runtimeViolations;
          note(e, f.name + " " + show_input(in) + ": " + std::to_string(steps) + " steps > bound " +
                      std::to_string(limit));
        }
      }
      if (a.runtime && a.runtime->ticked) {
        const TickedProgram& tp = *a.runtime->ticked;
        std::vector<ValuePtr> args = in.args;
        args.push_back(Value::data(tp.clock.zero));
        try {
          EvalResult t = call(tp.program, ticked_name(f.name), args, fuel * 4 + 16);
          bool same = t.status == EvalStatus::Finished && t.value->args.size() == 2 && *t.value->args[0] == *r.value &&
                      size(tp.program, t.value->args[1], SizeMeasure::Natural) == r.steps;
          if (!same) {
            ++e.clockMismatches;
            note(e, ticked_name(f.name) + " " + show_input(in) + " gave " + to_string(t.value) + ", expected (" +
                        to_string(r.value) + ", " + std::to_string(r.steps) + ")");
          }
        } catch (const Error& err) {
          ++e.clockMismatches;
          note(e, ticked_name(f.name) + " " + show_input(in) + ": " + err.what());
        }
      }
    }
    v.entries.push_back(std::move(e));
  }
  return v;
}

// ---- reports ----

namespace {

std::string symbols_of(const ConstraintGroup& g) {
  if (g.symbols.empty()) return "(ground)";
  std::string s;
  for (const auto& x : g.symbols) s += (s.empty() ? "" : " ") + x;
  return s;
}

void solver_text(std::ostream& os, const std::string& title, const ConstraintSet& cs, const SolveResult& r,
                 bool certify) {
  os << title << ": " << to_string(r.status) << ", " << r.groups.size() << " group(s)\n";
  for (size_t k = 0; k < r.groups.size(); ++k) {
    const auto& g = r.groups[k];
    os << "  [" << k + 1 << "] " << symbols_of(g.group) << ": " << to_string(g.outcome.status);
    if (g.outcome.status == SolveStatus::Sat && g.outcome.degree)
      os << " (degree " << g.outcome.degree << ", coefficients <= " << g.outcome.bound << ")";
    os << ", " << g.group.constraints.size() << " constraint(s)\n";
    if (g.outcome.status == SolveStatus::Unsat || g.outcome.status == SolveStatus::Timeout)
      for (size_t i : g.group.constraints) os << "      " << cs.constraints()[i].str() << "\n";
  }
  if (!r.interpretation.empty()) {
    std::istringstream lines(r.interpretation.str());
    for (std::string line; std::getline(lines, line);)
      if (!line.empty()) os << "  " << line << "\n";
  }
  if (certify && r.verification) {
    os << "  certificate: " << (r.verification->ok() ? "verified" : "FAILED") << "\n";
    for (const auto& c : r.verification->certificate)
      os << "    " << c.constraint.str() << "  [rhs - lhs = " << to_string(c.difference) << "]\n";
    if (r.verification->failing) os << "    failing: " << r.verification->failing->str() << "\n";
  }
}

nlohmann::json solver_json(const ConstraintSet& cs, const SolveResult& r, bool certify) {
  nlohmann::json j;
  j["status"] = to_string(r.status);
  j["groups"] = nlohmann::json::array();
  for (const auto& g : r.groups) {
    nlohmann::json cons = nlohmann::json::array();
    for (size_t i : g.group.constraints) cons.push_back(cs.constraints()[i].str());
    j["groups"].push_back({{"symbols", g.group.symbols},
                           {"status", to_string(g.outcome.status)},
                           {"degree", g.outcome.degree},
                           {"coefficient_bound", g.outcome.bound},
                           {"constraints", cons}});
  }
  nlohmann::json interp = nlohmann::json::object();
  for (const auto& [s, si] : r.interpretation.table()) {
    std::string args;
    for (size_t i = 0; i < si.arity; ++i) args += (i ? "," : "") + formal_argument(i);
    interp[s + "(" + args + ")"] = to_string(si.poly);
  }
  j["interpretation"] = interp;
  if (certify && r.verification) {
    nlohmann::json cert = nlohmann::json::array();
    for (const auto& c : r.verification->certificate)
      cert.push_back({{"constraint", c.constraint.str()}, {"difference", to_string(c.difference)}});
    j["certificate"] = {{"verified", r.verification->ok()}, {"entries", cert}};
  }
  return j;
}

std::string loc_text(const SourceLoc& l) { return l.valid() ? l.str() : "-"; }

}  // namespace

std::string text_report(const Analysis& a, bool certify) {
  std::ostringstream os;
  if (!a.file.empty()) os << "file: " << a.file << "\n";
  if (a.specialized) os << "specialized: shared functions were cloned per caller\n";
  if (!a.sccs.empty()) {
    os << "call graph:";
    for (const auto& scc : a.sccs) {
      os << " {";
      for (size_t i = 0; i < scc.size(); ++i) os << (i ? " " : "") << scc[i];
      os << "}";
    }
    os << "\n";
  }
  for (const auto& f : a.functions) {
    os << f.name << " : ";
    if (f.inferred)
      os << to_string(*f.inferred);
    else
      os << to_string(f.declared) << "  (unsolved)";
    if (f.annotated) os << "  [annotated]";
    if (f.lifted) os << "  [lifted]";
    os << "\n";
    if (!a.options.sizeOnly && (f.entry || f.runtime)) {
      if (f.runtime)
        os << "  runtime: " << to_string(*f.runtime) << "\n";
      else
        os << "  runtime: unknown (" << f.runtimeNote << ")\n";
    }
  }
  for (const auto& d : a.diagnostics) os << "error: " << d.str() << "\n";
  if (a.check)
    for (const auto& w : a.check->warnings) os << "warning: " << w.str() << "\n";
  if (a.check && a.solve) solver_text(os, "solver", a.check->constraints, *a.solve, certify);
  if (a.runtime && a.runtime->check && a.runtime->solve && certify)
    solver_text(os, "runtime solver", a.runtime->check->constraints, *a.runtime->solve, certify);
  if (a.options.check)
    os << "check: " << (a.accepted() ? "accepted" : "rejected") << "\n";
  else
    os << "status: " << (a.complete() ? "complete" : a.accepted() ? "accepted, some bounds missing" : "failed") << "\n";
  return os.str();
}

nlohmann::json json_report(const Analysis& a, bool certify) {
  nlohmann::json j;
  j["file"] = a.file;
  j["accepted"] = a.accepted();
  j["complete"] = a.complete();
  j["specialized"] = a.specialized;
  j["sccs"] = a.sccs;
  j["functions"] = nlohmann::json::array();
  for (const auto& f : a.functions) {
    nlohmann::json r{{"name", f.name},
                     {"simple_type", to_string(f.simple)},
                     {"declared", to_string(f.declared)},
                     {"annotated", f.annotated},
                     {"lifted", f.lifted},
                     {"entry", f.entry}};
    r["sized_type"] = f.inferred ? nlohmann::json(to_string(*f.inferred)) : nlohmann::json(nullptr);
    if (!a.options.sizeOnly) {
      r["runtime"] = f.runtime ? nlohmann::json(to_string(*f.runtime)) : nlohmann::json(nullptr);
      if (!f.runtimeNote.empty()) r["runtime_note"] = f.runtimeNote;
    }
    j["functions"].push_back(r);
  }
  j["diagnostics"] = nlohmann::json::array();
  for (const auto& d : a.diagnostics)
    j["diagnostics"].push_back({{"kind", to_string(d.kind)}, {"message", d.message}, {"location", loc_text(d.loc)}});
  j["warnings"] = nlohmann::json::array();
  if (a.check)
    for (const auto& w : a.check->warnings)
      j["warnings"].push_back({{"kind", to_string(w.kind)}, {"message", w.message}, {"location", loc_text(w.loc)}});
  if (a.check && a.solve) j["solver"] = solver_json(a.check->constraints, *a.solve, certify);
  if (a.runtime && a.runtime->check && a.runtime->solve)
    j["runtime_solver"] = solver_json(a.runtime->check->constraints, *a.runtime->solve, certify);
  if (a.runtime && !a.runtime->error.empty()) j["runtime_error"] = a.runtime->error;
  return j;
}

std::string text_report(const Validation& v) {
  std::ostringstream os;
  for (const auto& e : v.entries) {
    os << e.function << ": " << e.inputs << " input(s), " << e.sizeViolations << " size violation(s), "
       << e.runtimeViolations << " runtime violation(s), " << e.clockMismatches << " clock mismatch(es), "
       << e.inconclusive << " inconclusive\n";
    os << "  size slack by input size:";
    for (const auto& [s, k] : e.sizeSlack) os << " " << s << ":" << k;
    os << "\n";
    if (!e.runtimeSlack.empty()) {
      os << "  runtime slack by input size:";
      for (const auto& [s, k] : e.runtimeSlack) os << " " << s << ":" << k;
      os << "\n";
    }
    for (const auto& f : e.failures) os << "  ! " << f << "\n";
  }
  os << "validation: " << (v.ok() ? "ok" : "FAILED") << "\n";
  return os.str();
}

nlohmann::json json_report(const Validation& v) {
  nlohmann::json j;
  j["ok"] = v.ok();
  j["entries"] = nlohmann::json::array();
  for (const auto& e : v.entries) {
    nlohmann::json sizeSlack = nlohmann::json::object(), runtimeSlack = nlohmann::json::object();
    for (const auto& [s, k] : e.sizeSlack) sizeSlack[std::to_string(s)] = k;
    for (const auto& [s, k] : e.runtimeSlack) runtimeSlack[std::to_string(s)] = k;
    j["entries"].push_back({{"function", e.function},
                            {"inputs", e.inputs},
                            {"size_violations", e.sizeViolations},
                            {"runtime_violations", e.runtimeViolations},
                            {"clock_mismatches", e.clockMismatches},
                            {"inconclusive", e.inconclusive},
                            {"size_slack", sizeSlack},
                            {"runtime_slack", runtimeSlack},
                            {"failures", e.failures}});
  }
  return j;
}

Interpretation parse_interpretation(const std::string& text) {
  Interpretation interp;
  std::istringstream in(text);
  int lineNo = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineNo;
    if (auto c = line.find("--"); c != std::string::npos) line = line.substr(0, c);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::Syntax, "expected `F(x1,..) = polynomial`", SourceLoc{lineNo, 1});
    IndexTerm lhs = parse_index_term(line.substr(0, eq));
    if (lhs.kind != IndexTerm::Kind::Sym)
      throw Error(ErrorKind::Syntax, "left-hand side must be a symbol application", SourceLoc{lineNo, 1});
    IndexSubstitution theta;
    for (size_t i = 0; i < lhs.args.size(); ++i) {
      if (lhs.args[i].kind != IndexTerm::Kind::Var)
        throw Error(ErrorKind::Syntax, "symbol arguments must be variables", SourceLoc{lineNo, 1});
      theta[lhs.args[i].name] = IndexTerm::var(formal_argument(i));
    }
    IndexTerm rhs = substitute(parse_index_term(line.substr(eq + 1)), theta);
    std::set<std::string> formals;
    for (size_t i = 0; i < lhs.args.size(); ++i) formals.insert(formal_argument(i));
    for (const auto& v : rhs.vars())
      if (!formals.count(v))
        throw Error(ErrorKind::Syntax, "unbound variable " + v + " in interpretation", SourceLoc{lineNo, 1});
    interp.set(lhs.name, lhs.args.size(), to_polynomial(rhs, Interpretation{}));
  }
  return interp;
}

}  // namespace sizax
