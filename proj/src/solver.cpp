#include "sizax/solver.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <queue>
#include <random>
#include <set>

#include "sizax/subtyping.hpp"

namespace sizax {

std::vector<unsigned> SolverConfig::bound_schedule() const {
  std::vector<unsigned> out{1};
  if (coefficientBound > 1) out.push_back(coefficientBound);
  out.push_back(2 * coefficientBound + 1);
  return out;
}

SolverConfig default_solver_config() {
  SolverConfig cfg;
  if (const char* env = std::getenv("SIZAX_TIMEOUT")) {
    char* end = nullptr;
    long ms = std::strtol(env, &end, 10);
    if (end != env && ms > 0) cfg.timeoutPerGroup = std::chrono::milliseconds(ms);
  }
  return cfg;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return "sat";
    case SolveStatus::Unsat: return "unsat";
    case SolveStatus::Timeout: return "timeout";
    case SolveStatus::Skipped: return "skipped";
  }
  return "?";
}

namespace {

std::set<std::string> symbols_of(const Constraint& c) {
  std::map<std::string, size_t> syms;
  c.lhs.collect_symbols(syms);
  c.rhs.collect_symbols(syms);
  std::set<std::string> out;
  for (const auto& [s, _] : syms) out.insert(s);
  return out;
}

}  // namespace

std::vector<ConstraintGroup> partition(const ConstraintSet& cs, const std::map<std::string, int>& rank) {
  std::vector<std::string> symbols = cs.symbols();
  std::map<std::string, size_t> position;
  for (size_t i = 0; i < symbols.size(); ++i) position[symbols[i]] = i;
  const auto& deps = cs.dependencies();

  // Tarjan over "depends on" edges.
  std::map<std::string, int> index, low, component;
  std::vector<std::string> stack;
  std::set<std::string> onStack;
  std::vector<std::vector<std::string>> sccs;
  int counter = 0;
  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    onStack.insert(v);
    if (auto it = deps.find(v); it != deps.end()) {
      for (const auto& w : it->second) {
        if (!position.count(w)) continue;
        if (!index.count(w)) {
          visit(w);
          low[v] = std::min(low[v], low[w]);
        } else if (onStack.count(w)) {
          low[v] = std::min(low[v], index[w]);
        }
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> scc;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        onStack.erase(w);
        component[w] = static_cast<int>(sccs.size());
        scc.push_back(w);
      } while (w != v);
      std::sort(scc.begin(), scc.end(), [&](const std::string& a, const std::string& b) { return position[a] < position[b]; });
      sccs.push_back(scc);
    }
  };
  for (const auto& s : symbols)
    if (!index.count(s)) visit(s);

  // Kahn's algorithm on the condensation; ties go to the lowest rank, then
  // declaration order.
  size_t n = sccs.size();
  std::vector<std::set<int>> successors(n);
  std::vector<int> indegree(n, 0);
  for (const auto& [sym, ds] : deps) {
    if (!component.count(sym)) continue;
    for (const auto& d : ds) {
      if (!component.count(d)) continue;
      int from = component[d], to = component[sym];
      if (from != to && successors[from].insert(to).second) ++indegree[to];
    }
  }
  auto key = [&](int c) {
    int best = INT32_MAX;
    size_t pos = SIZE_MAX;
    for (const auto& s : sccs[c]) {
      auto it = rank.find(s);
      best = std::min(best, it == rank.end() ? INT32_MAX : it->second);
      pos = std::min(pos, position[s]);
    }
    return std::make_pair(best, pos);
  };
  using Entry = std::pair<std::pair<int, size_t>, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> ready;
  for (size_t c = 0; c < n; ++c)
    if (indegree[c] == 0) ready.push({key(static_cast<int>(c)), static_cast<int>(c)});
  std::vector<int> topo;
  while (!ready.empty()) {
    int c = ready.top().second;
    ready.pop();
    topo.push_back(c);
    for (int s : successors[c])
      if (--indegree[s] == 0) ready.push({key(s), s});
  }
  std::vector<int> slot(n);
  for (size_t k = 0; k < topo.size(); ++k) slot[topo[k]] = static_cast<int>(k);

  ConstraintGroup ground;
  std::vector<ConstraintGroup> groups(n);
  for (size_t k = 0; k < topo.size(); ++k) groups[k].symbols = sccs[topo[k]];
  for (size_t i = 0; i < cs.constraints().size(); ++i) {
    int latest = -1;
    for (const auto& s : symbols_of(cs.constraints()[i]))
      if (component.count(s)) latest = std::max(latest, slot[component[s]]);
    if (latest < 0)
      ground.constraints.push_back(i);
    else
      groups[latest].constraints.push_back(i);
  }
  std::vector<ConstraintGroup> out;
  if (!ground.constraints.empty()) out.push_back(ground);
  for (auto& g : groups) out.push_back(std::move(g));
  return out;
}

// ---- the coefficient search ----

namespace {

using Clock = std::chrono::steady_clock;

SymbolicPolynomial lift(const Polynomial& p) {
  return p.map_coefficients<Polynomial>([](std::int64_t c) { return Polynomial(c); });
}

struct Templates {
  std::map<std::string, SymbolicPolynomial> polys;
  std::vector<std::string> unknowns;  // coefficient unknowns in tie-break order
  std::map<std::string, std::vector<std::pair<Monomial, std::string>>> layout;  // symbol -> (monomial, unknown)
};

Templates make_templates(const std::vector<std::string>& symbols, const std::map<std::string, size_t>& arities,
                         unsigned degree) {
  Templates t;
  for (const auto& s : symbols) {
    std::vector<std::string> formals;
    for (size_t i = 0; i < arities.at(s); ++i) formals.push_back(formal_argument(i));
    SymbolicPolynomial poly;
    for (const auto& m : monomials_up_to(formals, degree)) {
      std::string c = "c" + std::to_string(t.unknowns.size());
      t.unknowns.push_back(c);
      t.layout[s].push_back({m, c});
      poly.add_term(m, Polynomial::variable(c));
    }
    t.polys[s] = poly;
  }
  return t;
}

SymbolicPolynomial expand(const IndexTerm& term, const Templates& tpl, const Interpretation& solved) {
  using K = IndexTerm::Kind;
  switch (term.kind) {
    case K::Var: return SymbolicPolynomial::variable(term.name);
    case K::Zero: return SymbolicPolynomial{};
    case K::Succ: return expand(term.args[0], tpl, solved) + SymbolicPolynomial(1);
    case K::Plus: return expand(term.args[0], tpl, solved) + expand(term.args[1], tpl, solved);
    case K::Mul: return expand(term.args[0], tpl, solved) * expand(term.args[1], tpl, solved);
    case K::Sym: {
      std::map<std::string, SymbolicPolynomial> subst;
      for (size_t i = 0; i < term.args.size(); ++i) subst[formal_argument(i)] = expand(term.args[i], tpl, solved);
      if (auto it = tpl.polys.find(term.name); it != tpl.polys.end()) return it->second.compose(subst);
      return lift(solved.at(term.name).poly).compose(subst);
    }
  }
  return {};
}

// A requirement sum_t coeff_t * prod unknown^e >= 0 over unknown indices.
struct Requirement {
  struct Term {
    std::int64_t coeff;
    std::vector<std::pair<int, unsigned>> factors;
  };
  std::vector<Term> terms;
};

std::int64_t power(std::int64_t base, unsigned e) {
  std::int64_t r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

class Search {
public:
  Search(std::vector<Requirement> reqs, size_t unknowns, unsigned bound, Clock::time_point deadline)
      : reqs_(std::move(reqs)), n_(unknowns), bound_(bound), deadline_(deadline),
        lower_(unknowns, 0), upper_(unknowns, static_cast<std::int64_t>(bound)), value_(unknowns, -1) {
    for (size_t i = 0; i < reqs_.size(); ++i)
      for (const auto& t : reqs_[i].terms)
        for (const auto& [v, _] : t.factors) watchers_[v].push_back(i);
    for (auto& w : watchers_) {
      std::sort(w.second.begin(), w.second.end());
      w.second.erase(std::unique(w.second.begin(), w.second.end()), w.second.end());
    }
  }

  bool propagate_units() {
    for (const auto& r : reqs_) {
      int var = -1;
      std::int64_t a = 0, b = 0;
      bool linearSingle = true;
      for (const auto& t : r.terms) {
        if (t.factors.empty()) {
          b += t.coeff;
        } else if (t.factors.size() == 1 && t.factors[0].second == 1 && (var < 0 || var == t.factors[0].first)) {
          var = t.factors[0].first;
          a += t.coeff;
        } else {
          linearSingle = false;
        }
      }
      if (!linearSingle) continue;
      if (var < 0) {
        if (b < 0) return false;
        continue;
      }
      if (a > 0) lower_[var] = std::max(lower_[var], (-b + a - 1) / a > 0 ? (-b + a - 1) / a : std::int64_t{0});
      if (a < 0) upper_[var] = std::min(upper_[var], b / (-a));
      if (lower_[var] > upper_[var]) return false;
    }
    return true;
  }

  // Exact coefficient sum, smallest first; the first hit is the
  // lexicographically smallest vector of that sum.
  std::optional<std::vector<std::int64_t>> run(bool& timedOut) {
    if (!propagate_units()) return std::nullopt;
    std::int64_t minSum = 0, maxSum = 0;
    for (size_t i = 0; i < n_; ++i) {
      minSum += lower_[i];
      maxSum += upper_[i];
    }
    for (std::int64_t s = minSum; s <= maxSum; ++s) {
      std::fill(value_.begin(), value_.end(), -1);
      if (dfs(0, s)) return value_;
      if (timedOut_) break;
    }
    timedOut = timedOut_;
    return std::nullopt;
  }

  std::uint64_t nodes() const { return nodes_; }

private:
  // Upper bound of the requirement given the partial assignment.
  bool satisfiable(const Requirement& r, std::int64_t remaining) const {
    std::int64_t total = 0;
    for (const auto& t : r.terms) {
      std::int64_t prod = t.coeff;
      for (const auto& [v, e] : t.factors) {
        std::int64_t x;
        if (value_[v] >= 0)
          x = value_[v];
        else
          x = t.coeff > 0 ? std::min(upper_[v], remaining) : lower_[v];
        prod *= power(x, e);
      }
      total += prod;
    }
    return total >= 0;
  }

  bool dfs(size_t idx, std::int64_t remaining) {
    if ((++nodes_ & 0xfff) == 0 && Clock::now() > deadline_) timedOut_ = true;
    if (timedOut_) return false;
    if (idx == n_) return remaining == 0;
    std::int64_t restLower = 0, restUpper = 0;
    for (size_t i = idx + 1; i < n_; ++i) {
      restLower += lower_[i];
      restUpper += upper_[i];
    }
    std::int64_t lo = std::max(lower_[idx], remaining - restUpper);
    std::int64_t hi = std::min(upper_[idx], remaining - restLower);
    for (std::int64_t v = lo; v <= hi; ++v) {
      value_[idx] = v;
      bool ok = true;
      if (auto it = watchers_.find(static_cast<int>(idx)); it != watchers_.end())
        for (size_t ri : it->second)
          if (!satisfiable(reqs_[ri], remaining - v)) {
            ok = false;
            break;
          }
      if (ok && dfs(idx + 1, remaining - v)) return true;
      if (timedOut_) break;
    }
    value_[idx] = -1;
    return false;
  }

  std::vector<Requirement> reqs_;
  size_t n_;
  unsigned bound_;
  Clock::time_point deadline_;
  std::vector<std::int64_t> lower_, upper_, value_;
  std::map<int, std::vector<size_t>> watchers_;
  std::uint64_t nodes_ = 0;
  bool timedOut_ = false;
};

}  // namespace

GroupOutcome solve_group(const std::vector<Constraint>& constraints, const std::vector<std::string>& unknowns,
                         const std::map<std::string, size_t>& arities, const Interpretation& solved,
                         const SolverConfig& cfg) {
  GroupOutcome out;
  auto deadline = Clock::now() + cfg.timeoutPerGroup;
  if (unknowns.empty()) {
    bool all = std::all_of(constraints.begin(), constraints.end(), [&](const Constraint& c) {
      return leq_semantic(solved, c.lhs, c.rhs) == Verdict::Yes;
    });
    out.status = all ? SolveStatus::Sat : SolveStatus::Unsat;
    return out;
  }
  std::map<unsigned, std::pair<Templates, std::optional<std::vector<Requirement>>>> perDegree;
  for (unsigned degree = 1; degree <= cfg.maxDegree; ++degree) {
    for (unsigned bound : cfg.bound_schedule()) {
      if (!perDegree.count(degree)) {
        Templates tpl = make_templates(unknowns, arities, degree);
        std::map<std::string, int> unknownIndex;
        for (size_t i = 0; i < tpl.unknowns.size(); ++i) unknownIndex[tpl.unknowns[i]] = static_cast<int>(i);
        std::vector<Requirement> reqs;
        std::set<std::string> seen;
        bool infeasible = false;
        for (const auto& c : constraints) {
          SymbolicPolynomial diff = expand(c.rhs, tpl, solved) - expand(c.lhs, tpl, solved);
          for (const auto& [m, coeff] : diff.terms()) {
            if (coeff.degree() == 0) {
              if (coeff.coefficient(Monomial{}) < 0) infeasible = true;
              continue;
            }
            if (!seen.insert(to_string(coeff)).second) continue;
            Requirement r;
            for (const auto& [um, uc] : coeff.terms()) {
              Requirement::Term t{uc, {}};
              for (const auto& [v, e] : um.factors()) t.factors.push_back({unknownIndex.at(v), e});
              r.terms.push_back(t);
            }
            reqs.push_back(std::move(r));
          }
        }
        perDegree.emplace(degree, std::make_pair(std::move(tpl), infeasible ? std::nullopt
                                                                            : std::optional<std::vector<Requirement>>(reqs)));
      }
      auto& [tpl, reqs] = perDegree.at(degree);
      if (!reqs) continue;
      Search search(*reqs, tpl.unknowns.size(), bound, deadline);
      bool timedOut = false;
      auto found = search.run(timedOut);
      out.nodes += search.nodes();
      if (found) {
        for (const auto& s : unknowns) {
          Polynomial p;
          for (const auto& [m, c] : tpl.layout.at(s)) {
            size_t idx = std::stoul(c.substr(1));
            p.add_term(m, (*found)[idx]);
          }
          out.solution.set(s, arities.at(s), p);
        }
        out.status = SolveStatus::Sat;
        out.degree = degree;
        out.bound = bound;
        return out;
      }
      if (timedOut) {
        out.status = SolveStatus::Timeout;
        return out;
      }
    }
  }
  out.status = SolveStatus::Unsat;
  return out;
}

Verification verify(const Interpretation& interp, const std::vector<Constraint>& cs, const SolverConfig& cfg) {
  Verification v;
  std::mt19937_64 rng(cfg.seed);
  for (const auto& c : cs) {
    Polynomial diff = to_polynomial(c.rhs, interp) - to_polynomial(c.lhs, interp);
    auto cex = refute(interp, c.lhs, c.rhs, rng, cfg.samples);
    if (cex) {
      v.status = Verification::Status::Refuted;
      v.failing = c;
      v.counterexample = cex;
      return v;
    }
    if (!absolutely_positive(diff)) {
      v.status = Verification::Status::Unverified;
      v.failing = c;
      return v;
    }
    v.certificate.push_back({c, diff});
  }
  return v;
}

Verification verify(const Interpretation& interp, const ConstraintSet& cs, const SolverConfig& cfg) {
  return verify(interp, cs.constraints(), cfg);
}

namespace {

bool interpretable(const Constraint& c, const Interpretation& interp, const std::set<std::string>& unknowns) {
  for (const auto& s : symbols_of(c))
    if (!interp.contains(s) && !unknowns.count(s)) return false;
  return true;
}

SolveResult finish(SolveResult r, const ConstraintSet& cs, const SolverConfig& cfg) {
  if (r.status != SolveStatus::Sat) return r;
  r.verification = verify(r.interpretation, cs, cfg);
  if (!r.verification->ok()) r.status = SolveStatus::Unsat;
  return r;
}

}  // namespace

SolveResult solve(const ConstraintSet& cs, const SolverConfig& cfg, const Interpretation& fixed,
                  const std::map<std::string, int>& rank) {
  SolveResult r;
  r.interpretation = fixed;
  for (auto& g : partition(cs, rank)) {
    GroupReport report;
    report.group = g;
    std::vector<std::string> unknowns;
    for (const auto& s : g.symbols)
      if (!fixed.contains(s)) unknowns.push_back(s);
    std::set<std::string> unknownSet(unknowns.begin(), unknowns.end());
    std::vector<Constraint> constraints;
    bool ready = true;
    for (size_t i : g.constraints) {
      constraints.push_back(cs.constraints()[i]);
      ready = ready && interpretable(cs.constraints()[i], r.interpretation, unknownSet);
    }
    auto start = Clock::now();
    if (!ready) {
      report.outcome.status = SolveStatus::Skipped;
    } else {
      report.outcome = solve_group(constraints, unknowns, cs.arities(), r.interpretation, cfg);
      if (report.outcome.status == SolveStatus::Sat) r.interpretation.merge(report.outcome.solution);
    }
    report.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (report.outcome.status == SolveStatus::Timeout && r.status == SolveStatus::Sat) r.status = SolveStatus::Timeout;
    if (report.outcome.status != SolveStatus::Sat && r.status == SolveStatus::Sat) r.status = SolveStatus::Unsat;
    r.groups.push_back(std::move(report));
  }
  return finish(std::move(r), cs, cfg);
}

SolveResult solve_joint(const ConstraintSet& cs, const SolverConfig& cfg, const Interpretation& fixed) {
  SolveResult r;
  r.interpretation = fixed;
  GroupReport report;
  for (const auto& s : cs.symbols())
    if (!fixed.contains(s)) report.group.symbols.push_back(s);
  for (size_t i = 0; i < cs.size(); ++i) report.group.constraints.push_back(i);
  auto start = Clock::now();
  report.outcome = solve_group(cs.constraints(), report.group.symbols, cs.arities(), fixed, cfg);
  report.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.status = report.outcome.status;
  if (r.status == SolveStatus::Sat) r.interpretation.merge(report.outcome.solution);
  r.groups.push_back(std::move(report));
  return finish(std::move(r), cs, cfg);
}

}  // namespace sizax

namespace sizax {

Verdict subtype_semantic(const Interpretation& interp, const SizedType& sub, const SizedType& sup,
                         const SolverConfig& cfg) {
  ConstraintSet cs = subtype_constraints(sub, sup);
  if (cs.arities().empty()) {
    for (const auto& c : cs.constraints())
      if (leq_semantic(interp, c.lhs, c.rhs) != Verdict::Yes) return Verdict::Unknown;
    return Verdict::Yes;
  }
  return solve(cs, cfg, interp).sat() ? Verdict::Yes : Verdict::Unknown;
}

}  // namespace sizax
