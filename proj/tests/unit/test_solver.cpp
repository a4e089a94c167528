#include <doctest.h>

#include "sizax/constraint.hpp"
#include "sizax/parser.hpp"
#include "sizax/solver.hpp"
#include "sizax/ticking.hpp"
#include "sizax/typecheck.hpp"
#include "support.hpp"

using namespace sizax;

namespace {

// x(1) is the first formal argument.
Polynomial x(int k) { return Polynomial::variable(formal_argument(k - 1)); }

SolverConfig quick() {
  SolverConfig cfg;
  cfg.timeoutPerGroup = std::chrono::milliseconds(5000);
  return cfg;
}

std::string term_of(const Polynomial& p, const std::vector<std::string>& vars) {
  // Rename x1.. to the given variables and render as an index term.
  std::map<std::string, Polynomial> subst;
  for (size_t k = 0; k < vars.size(); ++k) subst[formal_argument(k)] = Polynomial::variable(vars[k]);
  return to_string(from_polynomial(p.compose(subst)));
}

bool holds_by_sampling(const Interpretation& interp, const ConstraintSet& cs, std::mt19937_64& rng) {
  for (const auto& c : cs.constraints()) {
    auto vars = c.lhs.vars();
    auto more = c.rhs.vars();
    vars.insert(more.begin(), more.end());
    for (int s = 0; s < 200; ++s) {
      Assignment alpha;
      for (const auto& v : vars) alpha.values[v] = rng() % 25;
      if (evaluate(c.lhs, interp, alpha) > evaluate(c.rhs, interp, alpha)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("append's recursion constraints give i + j") {
  ConstraintSet cs = import_constraints("j <= F1(0,j)\nF1(i,j)+1 <= F1(i+1,j)\n");
  SolveResult r = solve(cs, quick());
  REQUIRE(r.sat());
  CHECK(r.interpretation.at("F1").poly == x(1) + x(2));
  REQUIRE(r.verification);
  CHECK(r.verification->ok());
  CHECK(r.verification->certificate.size() == 2);
  CHECK(r.groups.size() == 1);
  CHECK(r.groups[0].outcome.degree == 1);
  CHECK(r.groups[0].outcome.bound == 1);
}

TEST_CASE("ground constraints are decided on their own") {
  CHECK(solve(import_constraints("i * i <= i\n")).status == SolveStatus::Unsat);
  // True, but i*i - i has a negative coefficient: nothing to certify with.
  CHECK_FALSE(solve(import_constraints("i <= i * i\n")).sat());
  CHECK(solve(import_constraints("i <= i * i + i\n")).sat());
  CHECK(solve(import_constraints("F(i) + 1 <= F(i)\n"), quick()).status == SolveStatus::Unsat);
}

TEST_CASE("degree and coefficient limits are respected") {
  ConstraintSet square = import_constraints("i * i <= F(i)\n");
  SolverConfig linear = quick();
  linear.maxDegree = 1;
  CHECK(solve(square, linear).status == SolveStatus::Unsat);
  SolveResult quad = solve(square, quick());
  REQUIRE(quad.sat());
  CHECK(quad.interpretation.at("F").poly == x(1) * x(1));

  ConstraintSet five = import_constraints("5 * i <= F(i)\n");
  SolveResult r = solve(five, quick());
  REQUIRE(r.sat());
  CHECK(r.interpretation.at("F").poly == Polynomial(5) * x(1));
  CHECK(r.groups.back().outcome.bound == 7);
  SolverConfig small = quick();
  small.coefficientBound = 1;
  CHECK(small.bound_schedule() == std::vector<unsigned>{1, 3});
  CHECK(solve(five, small).status == SolveStatus::Unsat);
}

TEST_CASE("partition follows dependencies") {
  ConstraintSet cs = import_constraints("F(i) <= G(i)\ni <= F(i)\nG(i) + F(i) <= H(i)\n1 <= 2\n");
  auto groups = partition(cs);
  REQUIRE(groups.size() == 4);
  CHECK(groups[0].symbols.empty());
  CHECK(groups[1].symbols == std::vector<std::string>{"F"});
  CHECK(groups[2].symbols == std::vector<std::string>{"G"});
  CHECK(groups[3].symbols == std::vector<std::string>{"H"});
  SolveResult r = solve(cs, quick());
  REQUIRE(r.sat());
  CHECK(r.interpretation.at("H").poly == Polynomial(2) * x(1));
}

TEST_CASE("mutually dependent symbols share a group") {
  ConstraintSet cs = import_constraints("F(i) <= G(i + 1)\nG(i) <= F(i)\ni <= G(i)\n");
  auto groups = partition(cs);
  REQUIRE(groups.size() == 1);
  CHECK(groups[0].symbols.size() == 2);
  SolveResult joint = solve_joint(cs, quick());
  SolveResult per = solve(cs, quick());
  CHECK(joint.sat() == per.sat());
}

TEST_CASE("a failing group skips its dependents") {
  ConstraintSet cs = import_constraints("F(i) + 1 <= F(i)\nF(i) <= G(i)\n");
  SolveResult r = solve(cs, quick());
  CHECK(r.status == SolveStatus::Unsat);
  REQUIRE(r.groups.size() == 2);
  CHECK(r.groups[1].outcome.status == SolveStatus::Skipped);
}

TEST_CASE("fixed symbols are not unknowns") {
  Interpretation fixed;
  fixed.set("F", 1, x(1) + 3);
  ConstraintSet cs = import_constraints("i + 2 <= F(i)\nF(i) <= G(i)\n");
  SolveResult r = solve(cs, quick(), fixed);
  REQUIRE(r.sat());
  CHECK(r.interpretation.at("F").poly == x(1) + 3);
  CHECK(r.interpretation.at("G").poly == x(1) + 3);
  Interpretation tooSmall;
  tooSmall.set("F", 1, x(1));
  CHECK_FALSE(solve(cs, quick(), tooSmall).sat());
}

TEST_CASE("verify refutes a wrong interpretation") {
  ConstraintSet cs = import_constraints("i + 1 <= F(i)\n");
  Interpretation wrong;
  wrong.set("F", 1, x(1));
  Verification v = verify(wrong, cs);
  CHECK_FALSE(v.ok());
  CHECK(v.status == Verification::Status::Refuted);
  REQUIRE(v.counterexample);
  CHECK(v.counterexample->lhsValue > v.counterexample->rhsValue);

  // True but not absolutely positive: no certificate.
  ConstraintSet odd = import_constraints("2 * i <= F(i)\n");
  Interpretation square;
  square.set("F", 1, x(1) * x(1) + 1);
  CHECK(verify(square, odd).status == Verification::Status::Unverified);
}

TEST_CASE("a tiny timeout is reported as such") {
  // The runtime constraints of insertion sort need a large search.
  Program p = load_program(testing::corpus_source("isort"));
  TickedProgram tp = tick_program(p);
  Declarations d = generate_templates(tp.program);
  ConstraintSet cs = check_program(tp.program, d).constraints;
  SolverConfig cfg;
  cfg.timeoutPerGroup = std::chrono::milliseconds(1);
  SolveResult r = solve(cs, cfg);
  CHECK(r.status == SolveStatus::Timeout);
  CHECK_FALSE(r.verification.has_value());
  bool skipped = false;
  for (const auto& g : r.groups) skipped = skipped || g.outcome.status == SolveStatus::Skipped;
  CHECK(skipped);
}

TEST_CASE("constraints survive export and import") {
  ConstraintSet cs = import_constraints("j <= F1(0,j) ; append@3:1 equation\nF1(i,j)+1 <= F1(i+1,j)\n");
  std::string text = export_constraints(cs);
  ConstraintSet again = import_constraints(text);
  CHECK(export_constraints(again) == text);
  CHECK(again.size() == 2);
  CHECK(again.arities().at("F1") == 2);
}

TEST_CASE("property: a dominated polynomial is recovered exactly") {
  // For P <= F(args), the least coefficient sum that certifies is P itself.
  std::mt19937_64 rng(21);
  for (int round = 0; round < 60; ++round) {
    unsigned arity = 1 + rng() % 2;
    std::vector<std::string> vars = {"i", "j"};
    vars.resize(arity);
    std::vector<std::string> formals;
    for (unsigned k = 0; k < arity; ++k) formals.push_back(formal_argument(k));
    Polynomial p = testing::random_polynomial(rng, formals, 1);
    std::string args = vars[0] + (arity > 1 ? "," + vars[1] : "");
    ConstraintSet cs = import_constraints(term_of(p, vars) + " <= F(" + args + ")\n");
    SolveResult r = solve(cs, quick());
    REQUIRE(r.sat());
    CHECK(r.interpretation.at("F").poly == p);
  }
}

TEST_CASE("property: planted solutions are found and certified") {
  // Hidden linear interpretations of F, G, H; the constraints are built to
  // hold under them, so the search space contains a solution.
  std::mt19937_64 rng(22);
  std::vector<std::string> formals = {formal_argument(0), formal_argument(1)};
  for (int round = 0; round < 40; ++round) {
    Polynomial f = testing::random_polynomial(rng, formals, 1);
    Polynomial g = f + testing::random_polynomial(rng, formals, 1);
    Polynomial h = g + x(1);
    std::string text;
    text += term_of(f, {"i", "j"}) + " <= F(i,j)\n";
    text += "F(i,j) <= G(i,j)\n";
    text += term_of(g, {"i", "j"}) + " <= G(i,j)\n";
    text += "G(i,j) + i <= H(i,j)\n";
    text += "H(i,j) <= H(i+1,j)\n";
    ConstraintSet cs = import_constraints(text);
    SolveResult per = solve(cs, quick());
    REQUIRE(per.sat());
    CHECK(per.verification->ok());
    CHECK(holds_by_sampling(per.interpretation, cs, rng));
    // Minimal in coefficient sum, hence no larger than the planted ones.
    auto sum = [](const Polynomial& q) {
      std::int64_t s = 0;
      for (const auto& [m, c] : q.terms()) s += c;
      return s;
    };
    CHECK(sum(per.interpretation.at("F").poly) <= sum(f));
    CHECK(sum(per.interpretation.at("H").poly) <= sum(h));
    CHECK(solve_joint(cs, quick()).sat());
  }
}
