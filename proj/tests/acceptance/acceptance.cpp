// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "sizax/constraint.hpp"
#include "sizax/interpreter.hpp"
#include "sizax/parser.hpp"
#include "sizax/pipeline.hpp"
#include "sizax/program.hpp"
#include "sizax/solver.hpp"
#include "sizax/ticking.hpp"

using namespace sizax;

namespace {

using Clock = std::chrono::steady_clock;

std::string corpus_file(const std::string& name) { return std::string(SIZAX_CORPUS) + "/" + name + ".fp"; }

std::string read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> corpus() {
  std::vector<std::string> names;
  for (const auto& e : std::filesystem::directory_iterator(SIZAX_CORPUS))
    if (e.path().extension() == ".fp") names.push_back(e.path().stem().string());
  std::sort(names.begin(), names.end());
  return names;
}

// Collects reasons; a criterion passes when there are none.
struct Check {
  std::vector<std::string> problems;
  void require(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

SizedType sized(const std::string& s) { return parse_sized_type(s); }

// Same outer binder count and, after instantiating both with shared
// variables, equal indices up to polynomial normal form.
bool same_type(const SizedType& a, const SizedType& b) {
  if (a.is_forall() != b.is_forall()) return false;
  SizedType x = a, y = b;
  if (a.is_forall()) {
    if (a.bound.size() != b.bound.size()) return false;
    std::vector<IndexTerm> shared;
    for (size_t k = 0; k < a.bound.size(); ++k) shared.push_back(IndexTerm::var("v" + std::to_string(k)));
    x = instantiate(a, shared);
    y = instantiate(b, shared);
  }
  auto normal = [](const SizedType& t) {
    return map_indices(t, [](const IndexTerm& i) { return from_polynomial(to_polynomial(i, Interpretation{})); });
  };
  return alpha_equivalent(normal(x), normal(y));
}

std::string show(const std::optional<SizedType>& t) { return t ? to_string(*t) : "<none>"; }

std::uint64_t nat_of(const ValuePtr& v) {
  std::uint64_t n = 0;
  const Value* cur = v.get();
  while (cur->name == builtin::kSucc) {
    ++n;
    cur = cur->args[0].get();
  }
  return n;
}

std::uint64_t list_length(const ValuePtr& v) {
  std::uint64_t n = 0;
  const Value* cur = v.get();
  while (cur->name == builtin::kCons) {
    ++n;
    cur = cur->args[1].get();
  }
  return n;
}

AnalysisOptions size_only() {
  AnalysisOptions o;
  o.sizeOnly = true;
  return o;
}

// ---- 1 ----
void append_type(Check& c) {
  auto t0 = Clock::now();
  Analysis a = analyze(read(corpus_file("append")), size_only());
  double secs = seconds_since(t0);
  const FunctionReport* f = a.function("append");
  c.require(f && f->inferred, "append has no inferred type");
  if (!f || !f->inferred) return;
  c.require(same_type(*f->inferred, sized("forall i j. L i a -> L j a -> L (i + j) a")),
            "append inferred " + show(f->inferred));
  Polynomial expected = Polynomial::variable("x1") + Polynomial::variable("x2");
  bool found = false;
  for (const auto& [sym, si] : a.solve->interpretation.table())
    if (si.arity == 2 && si.poly == expected) found = true;
  c.require(found, "no symbol interpreted as x1 + x2:\n" + a.solve->interpretation.str());
  c.require(secs < 1.0, "append took " + std::to_string(secs) + " s");
}

// ---- 2 ----
void reverse_types_and_runtime(Check& c) {
  Analysis a = analyze(read(corpus_file("reverse")));
  const FunctionReport* rev = a.function("rev");
  const FunctionReport* reverse = a.function("reverse");
  c.require(rev && rev->inferred && same_type(*rev->inferred, sized("forall i j. L i a -> L j a -> L (i + j) a")),
            "rev inferred " + (rev ? show(rev->inferred) : "<missing>"));
  c.require(reverse && reverse->inferred && same_type(*reverse->inferred, sized("forall i. L i a -> L i a")),
            "reverse inferred " + (reverse ? show(reverse->inferred) : "<missing>"));
  if (!reverse || !reverse->runtime || !reverse->inferred) {
    c.require(false, "no runtime bound for reverse");
    return;
  }
  // Within i + 2 up to an additive constant of 2, in the argument variable.
  std::string i = *free_vars(reverse->inferred->unquantified().dom()).all().begin();
  Polynomial bound = to_polynomial(*reverse->runtime, Interpretation{});
  Polynomial ceiling = Polynomial::variable(i) + Polynomial(4);
  c.require(absolutely_positive(ceiling - bound), "runtime bound " + to_string(bound) + " exceeds " + i + " + 4");

  // Clock equals steps and the bound covers steps, every length up to 20.
  Program p = a.program;
  TickedProgram tp = tick_program(p);
  std::mt19937_64 rng(7);
  for (unsigned n = 0; n <= 20; ++n) {
    for (int rep = 0; rep < 3; ++rep) {
      auto xs = generate_value(p, SimpleType::base(builtin::kList, {SimpleType::base(builtin::kNat)}), n, rng);
      c.require(xs.has_value(), "no list of length " + std::to_string(n));
      if (!xs) continue;
      EvalResult plain = call(p, "reverse", {*xs});
      EvalResult ticked = call(tp.program, ticked_name("reverse"), {*xs, Value::nat(0)});
      c.require(ticked.value->args.size() == 2 && *ticked.value->args[0] == *plain.value,
                "ticked reverse disagrees on " + to_string(*xs));
      std::uint64_t clock = nat_of(ticked.value->args[1]);
      c.require(clock == plain.steps, "clock " + std::to_string(clock) + " vs steps " + std::to_string(plain.steps) +
                                          " at length " + std::to_string(n));
      Assignment alpha;
      alpha.values[i] = n;
      std::uint64_t predicted = evaluate(*reverse->runtime, Interpretation{}, alpha);
      c.require(plain.steps <= predicted, "runtime bound below observed steps at length " + std::to_string(n));
    }
  }
}

// ---- 3 ----
void twice_rank2(Check& c) {
  AnalysisOptions o = size_only();
  o.check = true;
  Analysis a = analyze(read(corpus_file("twice")), o);
  c.require(a.accepted(), "twice.fp rejected:\n" + text_report(a));
  try {
    SizedType t = type_expression(a, "twice Succ");
    c.require(same_type(t, sized("forall c. Nat c -> Nat (c + 2)")), "twice Succ : " + to_string(t));
  } catch (const Error& e) {
    c.require(false, std::string("twice Succ untypable: ") + e.what());
  }

  const std::string rank1 =
      "twice ::: forall i. (Nat i -> Nat (i + 1)) -> Nat i -> Nat (i + 2)\n"
      "twice f x = f (f x)\n";
  Analysis b = analyze(rank1, o);
  c.require(!b.accepted(), "rank-1 twice accepted");
  bool bodyRejected = std::any_of(b.diagnostics.begin(), b.diagnostics.end(), [](const Diagnostic& d) {
    return d.kind == ErrorKind::SubtypeFailure && d.message.rfind("twice", 0) == 0;
  });
  c.require(bodyRejected, "no subtyping failure reported for the body of rank-1 twice:\n" + text_report(b));
}

// ---- 4 ----
void product_check(Check& c) {
  auto t0 = Clock::now();
  AnalysisOptions o = size_only();
  o.check = true;
  Analysis a = analyze(read(corpus_file("product")), o);
  c.require(a.accepted(), "product.fp rejected:\n" + text_report(a));
  const FunctionReport* f = a.function("product");
  c.require(f && f->inferred && same_type(*f->inferred, sized("forall i j. L i a -> L j a -> L (i * j) (a, a)")),
            "product typed " + (f ? show(f->inferred) : "<missing>"));
  if (!f || !f->inferred) return;

  // Observed length against i * j, computed directly from the inputs.
  SimpleType list = SimpleType::base(builtin::kList, {SimpleType::atom("a")});
  auto inputs = generate_inputs(a.program, {list, list}, 16, 3);
  size_t tried = 0;
  for (const auto& in : inputs) {
    std::uint64_t i = list_length(in.args[0]), j = list_length(in.args[1]);
    if (i > 8 || j > 8) continue;
    ++tried;
    EvalResult r = call(a.program, "product", in.args);
    std::uint64_t n = list_length(r.value);
    c.require(n == i * j, "product of lengths " + std::to_string(i) + ", " + std::to_string(j) + " has length " +
                              std::to_string(n));
  }
  c.require(tried == 81, "expected all 81 length pairs up to 8, got " + std::to_string(tried));
  BoundReport rep = check_bound(a.program, *f->inferred, Interpretation{}, "product", inputs);
  c.require(rep.violations == 0 && rep.inconclusive == 0, "check_bound on product reports violations");
  double secs = seconds_since(t0);
  c.require(secs < 5.0, "product took " + std::to_string(secs) + " s");
}

// ---- 5 ----
void ticking_exact(Check& c) {
  size_t programs = 0, runs = 0;
  for (const auto& name : corpus()) {
    Program p = load_program(read(corpus_file(name)));
    TickedProgram tp = tick_program(p);
    ++programs;
    for (const auto& f : p.functions) {
      auto sig = first_order_signature(f);
      if (f.lifted || !sig) continue;
      for (const auto& in : generate_inputs(p, sig->first, 15, 11)) {
        EvalResult plain = call(p, f.name, in.args);
        std::vector<ValuePtr> args = in.args;
        args.push_back(Value::nat(0));
        EvalResult ticked = call(tp.program, ticked_name(f.name), args);
        ++runs;
        bool same = ticked.value->args.size() == 2 && *ticked.value->args[0] == *plain.value;
        std::uint64_t clock = same ? nat_of(ticked.value->args[1]) : 0;
        if (!same || clock != plain.steps) {
          c.require(false, name + ": " + f.name + " clock " + std::to_string(clock) + " vs steps " +
                               std::to_string(plain.steps));
          break;
        }
      }
    }
  }
  c.require(programs >= 10, "corpus has only " + std::to_string(programs) + " programs");
  c.require(runs > 1000, "only " + std::to_string(runs) + " runs");
}

// ---- 6 ----
void size_soundness(Check& c) {
  size_t accepted = 0, checked = 0;
  for (const auto& name : corpus()) {
    Analysis a = analyze(read(corpus_file(name)), size_only());
    if (!a.accepted()) continue;
    ++accepted;
    for (const auto& f : a.functions) {
      if (!f.entry || !f.inferred) continue;
      auto sig = first_order_signature(*a.program.find(f.name));
      auto inputs = generate_inputs(a.program, sig->first, 15, 5);
      BoundReport rep = check_bound(a.program, *f.inferred, Interpretation{}, f.name, inputs);
      checked += rep.checks.size() - rep.inconclusive;
      for (const auto& bc : rep.checks)
        if (bc.violation()) {
          c.require(false, name + ": " + f.name + " observed " + std::to_string(*bc.observed) + " > " +
                               std::to_string(bc.predicted));
          break;
        }
    }
  }
  c.require(accepted >= 8, "only " + std::to_string(accepted) + " corpus programs accepted");
  c.require(checked > 1000, "only " + std::to_string(checked) + " conclusive checks");
}

// ---- 7 ----
void canonicity(Check& c) {
  auto scaled = is_canonical(sized("forall i. Nat (2 * i) -> Nat i"));
  c.require(!scaled.canonical, "Nat (2 * i) -> Nat i accepted as canonical");
  c.require(scaled.diagnostic.find("non-variable index") != std::string::npos,
            "wrong diagnostic for a non-variable index: " + scaled.diagnostic);
  auto shared = is_canonical(sized("forall i. Nat i -> Nat i -> Nat i"));
  c.require(!shared.canonical, "Nat i -> Nat i -> Nat i accepted as canonical");
  c.require(shared.diagnostic.find("more than once") != std::string::npos,
            "wrong diagnostic for a repeated variable: " + shared.diagnostic);
  c.require(is_canonical(sized("forall i j. Nat i -> Nat j -> Nat (i + j)")).canonical, "append-like type rejected");
}

// ---- 8 ----
// Independent re-check: direct evaluation of both sides at random points.
bool survives_sampling(const Interpretation& interp, const Constraint& k, std::mt19937_64& rng) {
  std::set<std::string> vars = k.lhs.vars();
  auto more = k.rhs.vars();
  vars.insert(more.begin(), more.end());
  std::uniform_int_distribution<std::uint64_t> d(0, 30);
  for (int s = 0; s < 1000; ++s) {
    Assignment alpha;
    for (const auto& v : vars) alpha.values[v] = d(rng);
    if (evaluate(k.lhs, interp, alpha) > evaluate(k.rhs, interp, alpha)) return false;
  }
  return true;
}

void certificates(Check& c) {
  std::mt19937_64 rng(99);
  size_t sat = 0;
  auto audit = [&](const std::string& label, const ConstraintSet& cs) {
    SolverConfig cfg = default_solver_config();
    cfg.timeoutPerGroup = std::chrono::milliseconds(1500);
    SolveResult r = solve(cs, cfg);
    if (!r.sat()) return;
    ++sat;
    c.require(r.verification && r.verification->ok(), label + ": Sat without a certificate");
    for (const auto& k : cs.constraints()) {
      Polynomial diff = to_polynomial(k.rhs, r.interpretation) - to_polynomial(k.lhs, r.interpretation);
      c.require(absolutely_positive(diff), label + ": not absolutely positive: " + k.str());
      c.require(survives_sampling(r.interpretation, k, rng), label + ": refuted by sampling: " + k.str());
    }
  };
  for (const auto& name : corpus()) {
    Program p = load_program(read(corpus_file(name)));
    Declarations d = generate_templates(p);
    audit(name, check_program(p, d).constraints);
    try {
      TickedProgram tp = tick_program(p);
      Declarations td = generate_templates(tp.program);
      audit(name + " (ticked)", check_program(tp.program, td).constraints);
    } catch (const Error&) {
      // higher-rank functional arguments have no ticked templates
    }
  }
  c.require(sat >= 10, "only " + std::to_string(sat) + " satisfiable sets");

  ConstraintSet square = import_constraints("i * i <= i\n");
  SolveResult r = solve(square);
  c.require(r.status == SolveStatus::Unsat, std::string("{i*i <= i} gave ") + to_string(r.status));
}

// ---- 9 ----
void incrementality(Check& c) {
  for (const auto& name : corpus()) {
    Program p = load_program(read(corpus_file(name)));
    Declarations d = generate_templates(p);
    CheckResult chk = check_program(p, d);
    const ConstraintSet& cs = chk.constraints;

    std::map<std::string, int> fnRank;
    auto sccs = call_graph_sccs(p);
    for (size_t k = 0; k < sccs.size(); ++k)
      for (const auto& f : sccs[k]) fnRank[f] = static_cast<int>(k);
    std::map<std::string, int> rank;
    for (const auto& [sym, owner] : cs.owners())
      if (fnRank.count(owner)) rank[sym] = fnRank[owner];

    SolveResult per = solve(cs, default_solver_config(), {}, rank);
    SolveResult joint = solve_joint(cs);
    c.require(per.sat() == joint.sat(), name + ": per-group " + to_string(per.status) + ", joint " +
                                            to_string(joint.status));

    // Every symbol a group depends on was solved by an earlier group (or the
    // same one), and groups never go back in the call-graph condensation. A
    // group is placed at its lowest owner: a functional argument's symbol is
    // chosen together with the callers' instantiations.
    std::map<std::string, size_t> position;
    int lastRank = -1;
    for (size_t g = 0; g < per.groups.size(); ++g) {
      int r = INT32_MAX;
      for (const auto& s : per.groups[g].group.symbols) {
        position[s] = g;
        if (rank.count(s)) r = std::min(r, rank[s]);
      }
      if (r == INT32_MAX) continue;
      c.require(r >= lastRank, name + ": group " + std::to_string(g) + " goes back in the condensation");
      lastRank = r;
    }
    for (const auto& [sym, deps] : cs.dependencies())
      for (const auto& dep : deps) {
        if (!position.count(sym) || !position.count(dep)) continue;
        c.require(position[dep] <= position[sym], name + ": " + sym + " solved before its dependency " + dep);
      }
    size_t covered = 0;
    for (const auto& g : per.groups) covered += g.group.constraints.size();
    c.require(covered == cs.size(), name + ": groups do not cover every constraint");
  }
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* title;
    std::function<void(Check&)> run;
  };
  std::vector<Criterion> criteria = {
      {1, "append infers L_i -> L_j -> L_(i+j)", append_type},
      {2, "reverse types, runtime bound and exact clock", reverse_types_and_runtime},
      {3, "twice: rank-2 accepted, twice Succ typed, rank-1 rejected", twice_rank2},
      {4, "product accepted, output length exactly i*j", product_check},
      {5, "ticked clock equals step count", ticking_exact},
      {6, "size bounds dominate observed sizes", size_soundness},
      {7, "canonicity gate", canonicity},
      {8, "solver certificates re-verify; i*i <= i unsat", certificates},
      {9, "per-group and joint solving agree, condensation order", incrementality},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check c;
    auto t0 = Clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.problems.push_back(std::string("exception: ") + e.what());
    }
    double secs = seconds_since(t0);
    std::cout << (c.problems.empty() ? "PASS" : "FAIL") << " criterion " << cr.number << ": " << cr.title << " ("
              << std::fixed << std::setprecision(2) << secs << " s)\n";
    for (size_t k = 0; k < c.problems.size() && k < 5; ++k) std::cout << "    " << c.problems[k] << "\n";
    if (!c.problems.empty()) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
