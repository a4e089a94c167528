#include <doctest.h>

#include "sizax/parser.hpp"
#include "sizax/pipeline.hpp"
#include "support.hpp"

using namespace sizax;

namespace {

AnalysisOptions size_only() {
  AnalysisOptions o;
  o.sizeOnly = true;
  return o;
}

const char* kShared = R"(
pick :: Nat -> Nat -> Nat
pick x y = y

one :: Nat -> Nat
one x = pick x 1

same :: Nat -> Nat
same x = pick 0 x
)";

}  // namespace

TEST_CASE("reports are deterministic") {
  for (const char* name : {"append", "reverse", "twice", "tree"}) {
    CAPTURE(name);
    std::string src = testing::corpus_source(name);
    Analysis a = analyze(src, {}, name);
    Analysis b = analyze(src, {}, name);
    CHECK(text_report(a) == text_report(b));
    CHECK(json_report(a, true).dump() == json_report(b, true).dump());
  }
}

TEST_CASE("the json report carries types, bounds and solver groups") {
  Analysis a = analyze(testing::corpus_source("append"), {}, "append.fp");
  nlohmann::json j = json_report(a);
  CHECK(j["file"] == "append.fp");
  CHECK(j["accepted"] == true);
  CHECK(j["complete"] == true);
  REQUIRE(j["functions"].size() == 1);
  CHECK(j["functions"][0]["name"] == "append");
  CHECK(j["functions"][0]["sized_type"] == "forall i j. L i a -> L j a -> L (i+j) a");
  CHECK(j["functions"][0]["runtime"] == "i+1");
  CHECK(j["solver"]["status"] == "sat");
  CHECK(j["solver"]["interpretation"]["F1(x1,x2)"] == "x1 + x2");
  CHECK_FALSE(j["solver"].contains("certificate"));
  CHECK(json_report(a, true)["solver"]["certificate"]["verified"] == true);
  CHECK(text_report(a).find("status: complete") != std::string::npos);
}

TEST_CASE("accepted and complete") {
  Analysis ok = analyze(testing::corpus_source("reverse"));
  CHECK(ok.accepted());
  CHECK(ok.complete());
  REQUIRE(ok.function("reverse"));
  CHECK(ok.function("reverse")->runtime.has_value());

  // The sum of a list's elements has no bound in its length.
  Analysis sum = analyze(testing::corpus_source("sum"), size_only());
  CHECK_FALSE(sum.accepted());
  CHECK_FALSE(sum.complete());
  // Its callee still gets a certified type; sum itself does not.
  REQUIRE(sum.function("plus")->inferred);
  CHECK(to_string(*sum.function("plus")->inferred) == "forall i j. Nat i -> Nat j -> Nat (i+j)");
  CHECK_FALSE(sum.function("sum")->inferred);

  Analysis bad = analyze("f :: Nat -> Nat\nf x = y\n");
  CHECK_FALSE(bad.accepted());
  REQUIRE_FALSE(bad.diagnostics.empty());
  CHECK(bad.diagnostics[0].kind == ErrorKind::UnknownIdentifier);
}

TEST_CASE("interpretations parse and fix symbols") {
  Interpretation interp = parse_interpretation("F1(x1,x2) = x1 + x2 + 1\n-- comment\n\nG(x1) = 2*x1*x1\n");
  CHECK(interp.at("F1").poly == Polynomial::variable("x1") + Polynomial::variable("x2") + 1);
  CHECK(interp.at("F1").arity == 2);
  CHECK(interp.at("G").poly == Polynomial(2) * Polynomial::variable("x1") * Polynomial::variable("x1"));
  CHECK_THROWS_AS(parse_interpretation("F1(x1) = \n"), Error);

  AnalysisOptions loose = size_only();
  loose.interpretation = interp;
  Analysis a = analyze(testing::corpus_source("append"), loose);
  CHECK(a.accepted());
  CHECK(to_string(*a.function("append")->inferred) == "forall i j. L i a -> L j a -> L (i+j+1) a");

  AnalysisOptions tight = size_only();
  tight.interpretation = parse_interpretation("F1(x1,x2) = x2\n");
  CHECK_FALSE(analyze(testing::corpus_source("append"), tight).accepted());
}

TEST_CASE("interpreting an index substitutes and normalizes") {
  Interpretation interp = parse_interpretation("F(x1,x2) = x1 * x2 + x1\n");
  IndexTerm t = parse_index_term("F(i + 1, j)");
  CHECK(to_polynomial(interpret_index(t, interp), {}) ==
        (Polynomial::variable("i") + 1) * (Polynomial::variable("j") + 1));
  SizedType s = interpret_type(parse_sized_type("forall i j. Nat i -> Nat j -> Nat F(i,j)"), interp);
  CHECK(to_string(s) == "forall i j. Nat i -> Nat j -> Nat (i*j+i)");
}

TEST_CASE("specialization clones a shared component per extra caller") {
  Program p = load_program(kShared);
  Program q = specialize(p);
  REQUIRE(q.find("pick_s1"));
  CHECK(q.find("pick_s1")->lifted);
  CHECK(q.find("pick_s1")->equations.size() == p.find("pick")->equations.size());
  CHECK(callees(*q.find("one")) == std::vector<std::string>{"pick"});
  CHECK(callees(*q.find("same")) == std::vector<std::string>{"pick_s1"});
  CHECK(q.typed);
  // Both still analyse to the same sizes.
  Analysis a = analyze_program(q, size_only());
  CHECK(a.accepted());
  CHECK(to_string(*a.function("same")->inferred) == "forall i. Nat i -> Nat i");
  CHECK(to_string(*a.function("one")->inferred) == "forall i. Nat i -> Nat 1");
  // Annotated components are left alone.
  Program twice = testing::corpus_program("twice");
  CHECK(specialize(twice).functions.size() == twice.functions.size());
}

TEST_CASE("closed expressions are typed over the analysis") {
  Analysis a = analyze(testing::corpus_source("arith"), size_only());
  REQUIRE(a.accepted());
  SizedType t = type_expression(a, "add 1 (double 2)");
  CHECK(to_string(t) == "Nat 5");
  Analysis tw = analyze(testing::corpus_source("twice"), size_only());
  CHECK(to_string(type_expression(tw, "twice Succ 3")) == "Nat 5");
  CHECK_THROWS_AS(type_expression(a, "nope 1"), Error);
}

TEST_CASE("validation finds no violations on accepted corpus programs") {
  for (const char* name : {"append", "reverse", "length", "map", "tree", "twice", "evenodd"}) {
    CAPTURE(name);
    Analysis a = analyze(testing::corpus_source(name));
    REQUIRE(a.accepted());
    Validation v = validate(a, 8, 3);
    CHECK(v.ok());
    REQUIRE_FALSE(v.entries.empty());
    for (const auto& e : v.entries) {
      CAPTURE(e.function);
      CHECK(e.inputs > 0);
      CHECK(e.failures.empty());
      for (const auto& [total, slack] : e.sizeSlack) CHECK(slack >= 0);
      for (const auto& [total, slack] : e.runtimeSlack) CHECK(slack >= 0);
    }
    CHECK(json_report(v)["ok"] == true);
  }
}

TEST_CASE("a timed-out group leaves its callees' runtime bounds intact") {
  AnalysisOptions o;
  o.solver.timeoutPerGroup = std::chrono::milliseconds(300);
  Analysis a = analyze(testing::corpus_source("isort"), o);
  CHECK(a.accepted());
  REQUIRE(a.function("leq")->runtime);
  CHECK(to_string(*a.function("leq")->runtime) == "j+1");
  CHECK_FALSE(a.function("isort")->runtime);
  CHECK_FALSE(a.complete());
}
