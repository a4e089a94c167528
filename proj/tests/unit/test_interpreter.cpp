#include <doctest.h>

#include "sizax/interpreter.hpp"
#include "sizax/parser.hpp"
#include "support.hpp"

using namespace sizax;

namespace {

ValuePtr lit(const Program& p, const std::string& s) { return to_value(parse_value(s, p)); }

// Natural measure computed directly from the value shape, as an oracle.
std::uint64_t naive_size(const Program& p, const ValuePtr& v, const SimpleType& t) {
  if (!t.is_base()) return 0;
  std::uint64_t total = v->args.empty() ? 0 : 1;
  auto argTypes = constructor_arg_types(p, v->name, t);
  for (size_t k = 0; k < v->args.size(); ++k)
    if (argTypes[k] == t) total += naive_size(p, v->args[k], t);
  return total;
}

}  // namespace

TEST_CASE("evaluation counts equation firings") {
  Program p = testing::corpus_program("reverse");
  EvalResult r = call(p, "reverse", {lit(p, "[1,2,3]")});
  CHECK(to_string(r.value) == "[3, 2, 1]");
  CHECK(r.steps == 5);  // reverse once, rev four times
  CHECK(r.status == EvalStatus::Finished);

  Program arith = testing::corpus_program("arith");
  EvalResult m = call(arith, "mult", {Value::nat(3), Value::nat(4)});
  CHECK(to_string(m.value) == "12");
  // mult fires i+1 times, add fires j+1 times per mult step.
  CHECK(m.steps == 4 + 3 * 5);
}

TEST_CASE("terms evaluate call by value") {
  Program p = testing::corpus_program("twice");
  EvalResult r = evaluate(p, parse_expression("twice Succ 3", p));
  CHECK(to_string(r.value) == "5");
  CHECK(r.steps == 1);
  EvalResult partial = evaluate(p, parse_expression("twice Succ", p));
  CHECK(partial.value->kind == Value::Kind::Partial);
}

TEST_CASE("fuel bounds the run and stuck terms throw") {
  Program loop = load_program("f :: Nat -> Nat\nf x = f (Succ x)\n");
  EvalResult r = call(loop, "f", {Value::nat(0)}, 100);
  CHECK(r.status == EvalStatus::FuelExhausted);
  CHECK(r.steps == 100);

  Program partialMatch = load_program("pred :: Nat -> Nat\npred (Succ x) = x\n");
  try {
    call(partialMatch, "pred", {Value::nat(0)});
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StuckTerm);
  }
}

TEST_CASE("deep recursion does not overflow the native stack") {
  Program p = testing::corpus_program("length");
  std::vector<ValuePtr> xs(100000, Value::nat(0));
  EvalResult r = call(p, "length", {Value::list(xs)});
  CHECK(size(p, r.value) == 100000);
}

TEST_CASE("size measures") {
  Program p = testing::corpus_program("tree");
  ValuePtr leaf = Value::data("Leaf");
  ValuePtr t = Value::data("Node", {Value::data("Node", {leaf, Value::nat(7), leaf}), Value::nat(9), leaf});
  CHECK(size(p, t) == 2);
  CHECK(size(p, t, SizeMeasure::Strict) == 5);
  CHECK(size(p, Value::list({Value::nat(0), Value::nat(1)})) == 2);
  CHECK(size(p, Value::nat(4)) == 4);
  CHECK(size(p, Value::nat(4), SizeMeasure::Strict) == 5);
  CHECK_THROWS_AS(size(p, Value::pair(Value::nat(1), Value::nat(2))), Error);
}

TEST_CASE("values print and convert") {
  Program p = testing::corpus_program("append");
  CHECK(to_string(lit(p, "(1, [])")) == "(1, [])");
  CHECK(*to_value(to_term(lit(p, "[2, 0]"))) == *lit(p, "[2, 0]"));
}

TEST_CASE("property: generated values have exactly the requested size") {
  std::mt19937_64 rng(31);
  Program tree = testing::corpus_program("tree");
  Program isort = testing::corpus_program("isort");
  struct Case {
    const Program* p;
    SimpleType t;
  };
  // Which sizes exist: a strict tree has odd size, a strict list or
  // numeral at least 1, Bool only its constructor weight.
  auto exists = [](const SimpleType& t, SizeMeasure m, unsigned n) {
    bool strict = m == SizeMeasure::Strict;
    if (t.name == "Bool") return n == (strict ? 1u : 0u);
    if (t.name == "Tree" && strict) return n % 2 == 1;
    return !strict || n >= 1;
  };
  std::vector<Case> cases = {{&tree, SimpleType::base("Tree")},
                             {&tree, builtin::nat()},
                             {&isort, builtin::list(builtin::nat())},
                             {&isort, SimpleType::base("Bool")}};
  for (const auto& c : cases)
    for (auto measure : {SizeMeasure::Natural, SizeMeasure::Strict})
      for (unsigned n = 0; n <= 12; ++n)
        for (int rep = 0; rep < 5; ++rep) {
          CAPTURE(to_string(c.t));
          CAPTURE(n);
          auto v = generate_value(*c.p, c.t, n, rng, measure);
          REQUIRE(v.has_value() == exists(c.t, measure, n));
          if (!v) continue;
          CHECK(size(*c.p, *v, measure) == n);
          if (measure == SizeMeasure::Natural) CHECK(naive_size(*c.p, *v, c.t) == n);
        }
}

TEST_CASE("input generation covers every size pair for two arguments") {
  Program p = testing::corpus_program("append");
  SimpleType list = builtin::list(SimpleType::atom("a"));
  auto inputs = generate_inputs(p, {list, list}, 6, 1);
  std::set<std::pair<unsigned, unsigned>> seen;
  for (const auto& in : inputs) {
    CHECK(in.sizes.size() == 2);
    CHECK(size(p, in.args[0]) == in.sizes[0]);
    seen.insert({in.sizes[0], in.sizes[1]});
  }
  for (unsigned i = 0; i <= 6; ++i)
    for (unsigned j = 0; j <= 6; ++j) CHECK(seen.count({i, j}));
  // Same seed, same inputs.
  auto again = generate_inputs(p, {list, list}, 6, 1);
  REQUIRE(again.size() == inputs.size());
  for (size_t k = 0; k < inputs.size(); ++k) CHECK(*again[k].args[0] == *inputs[k].args[0]);
}

TEST_CASE("bound checking flags values above the bound") {
  Program p = testing::corpus_program("append");
  SimpleType list = builtin::list(SimpleType::atom("a"));
  auto inputs = generate_inputs(p, {list, list}, 5, 2);
  auto good = check_bound(p, parse_sized_type("forall i j. L i a -> L j a -> L (i + j) a"), {}, "append", inputs);
  CHECK(good.violations == 0);
  CHECK(good.inconclusive == 0);
  auto bad = check_bound(p, parse_sized_type("forall i j. L i a -> L j a -> L j a"), {}, "append", inputs);
  CHECK(bad.violations > 0);
  for (const auto& c : bad.checks)
    if (c.violation()) CHECK(*c.observed > c.predicted);
}

TEST_CASE("sampled inputs only use sizes at which values exist") {
  Program p = testing::corpus_program("isort");
  std::vector<SimpleType> args = {SimpleType::base("Bool"), builtin::nat(), builtin::nat(), builtin::list(builtin::nat())};
  auto inputs = generate_inputs(p, args, 10, 4, SizeMeasure::Natural, 60);
  CHECK(inputs.size() == 60);
  for (const auto& in : inputs) {
    CHECK(in.sizes[0] == 0);
    for (size_t k = 0; k < args.size(); ++k) CHECK(size(p, in.args[k]) == in.sizes[k]);
  }
}
