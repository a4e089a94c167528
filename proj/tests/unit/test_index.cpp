#include <doctest.h>

#include "sizax/index.hpp"
#include "sizax/parser.hpp"
#include "support.hpp"

using namespace sizax;

namespace {

Polynomial var(const std::string& v) { return Polynomial::variable(v); }

std::int64_t at(const Polynomial& p, const std::map<std::string, std::int64_t>& env) {
  return p.evaluate<std::int64_t>([&](const std::string& v) { return env.at(v); });
}

// Random index term over builtins and the given variables.
IndexTerm random_index(std::mt19937_64& rng, const std::vector<std::string>& vars, int depth) {
  int pick = depth <= 0 ? static_cast<int>(rng() % 2) : static_cast<int>(rng() % 5);
  switch (pick) {
    case 0: return IndexTerm::var(vars[rng() % vars.size()]);
    case 1: return IndexTerm::numeral(static_cast<unsigned>(rng() % 3));
    case 2: return IndexTerm::succ(random_index(rng, vars, depth - 1));
    case 3: return IndexTerm::plus(random_index(rng, vars, depth - 1), random_index(rng, vars, depth - 1));
    default: return IndexTerm::mul(random_index(rng, vars, depth - 1), random_index(rng, vars, depth - 1));
  }
}

}  // namespace

TEST_CASE("polynomial arithmetic normalizes") {
  Polynomial p = (var("i") + 1) * (var("i") + 1);
  CHECK(to_string(p) == "i*i + 2*i + 1");
  CHECK((p - p).is_zero());
  CHECK(p.degree() == 2);
  CHECK(p.coefficient(Monomial::variable("i")) == 2);
  CHECK(to_string(var("j") + var("i")) == "i + j");
  CHECK(to_string(var("i") * var("j") + var("i") + 2) == "i*j + i + 2");
  CHECK(to_string(Polynomial(0)) == "0");
  CHECK(to_string(var("i") - 3) == "i - 3");
}

TEST_CASE("compose substitutes simultaneously") {
  Polynomial p = var("x1") * var("x2") + var("x1");
  Polynomial q = p.compose({{"x1", var("x2")}, {"x2", var("x1") + 1}});
  CHECK(q == var("x2") * var("x1") + var("x2") + var("x2"));
}

TEST_CASE("absolute positiveness") {
  CHECK(absolutely_positive(var("i") + 1));
  CHECK(absolutely_positive(Polynomial(0)));
  CHECK_FALSE(absolutely_positive(var("i") - var("i") * var("i")));
}

TEST_CASE("monomials_up_to counts binomially") {
  // Monomials of degree <= d over n variables: C(n + d, d).
  auto choose = [](unsigned n, unsigned k) {
    std::uint64_t r = 1;
    for (unsigned t = 1; t <= k; ++t) r = r * (n - k + t) / t;
    return r;
  };
  for (unsigned n = 1; n <= 4; ++n)
    for (unsigned d = 0; d <= 3; ++d) {
      std::vector<std::string> vars;
      for (unsigned k = 0; k < n; ++k) vars.push_back("x" + std::to_string(k + 1));
      auto ms = monomials_up_to(vars, d);
      CHECK(ms.size() == choose(n + d, d));
      CHECK(std::is_sorted(ms.begin(), ms.end()));
    }
}

TEST_CASE("property: polynomial operations commute with evaluation") {
  std::mt19937_64 rng(1);
  std::vector<std::string> vars = {"i", "j", "k"};
  std::uniform_int_distribution<std::int64_t> val(0, 9);
  for (int round = 0; round < 300; ++round) {
    Polynomial p = testing::random_polynomial(rng, vars, 2, true);
    Polynomial q = testing::random_polynomial(rng, vars, 2, true);
    std::map<std::string, std::int64_t> env = {{"i", val(rng)}, {"j", val(rng)}, {"k", val(rng)}};
    CHECK(at(p + q, env) == at(p, env) + at(q, env));
    CHECK(at(p * q, env) == at(p, env) * at(q, env));
    CHECK(at(p - q, env) == at(p, env) - at(q, env));
    Polynomial composed = p.compose({{"i", q}});
    auto env2 = env;
    env2["i"] = at(q, env);
    CHECK(at(composed, env) == at(p, env2));
  }
}

TEST_CASE("property: absolutely positive polynomials are non-negative") {
  std::mt19937_64 rng(2);
  std::vector<std::string> vars = {"i", "j"};
  std::uniform_int_distribution<std::int64_t> val(0, 20);
  for (int round = 0; round < 300; ++round) {
    Polynomial p = testing::random_polynomial(rng, vars, 3, true);
    if (!absolutely_positive(p)) continue;
    for (int s = 0; s < 20; ++s) CHECK(at(p, {{"i", val(rng)}, {"j", val(rng)}}) >= 0);
  }
}

TEST_CASE("index terms parse and print") {
  CHECK(to_string(parse_index_term("i + j")) == "i+j");
  CHECK(to_string(parse_index_term("(i + 1) * j")) == "(i+1)*j");
  CHECK(to_string(parse_index_term("2")) == "2");
  CHECK(parse_index_term("i + 2") == IndexTerm::succ(IndexTerm::succ(IndexTerm::var("i"))));
  IndexTerm f = parse_index_term("F1(i, j + 1)");
  CHECK(f.is_sym());
  CHECK(f.args.size() == 2);
  CHECK(f.mentions_symbol());
  CHECK(f.vars() == std::set<std::string>{"i", "j"});
  CHECK_THROWS_AS(parse_index_term("i +"), Error);
}

TEST_CASE("interpretation composes into terms") {
  Interpretation interp;
  interp.set("F", 2, var("x1") * var("x2") + var("x2"));
  IndexTerm t = parse_index_term("F(i + 1, j)");
  CHECK(to_polynomial(t, interp) == var("i") * var("j") + var("j") + var("j"));
  Assignment alpha;
  alpha.values = {{"i", 2}, {"j", 5}};
  CHECK(evaluate(t, interp, alpha) == 20);
  CHECK_THROWS_AS(to_polynomial(parse_index_term("G(i)"), interp), Error);
  CHECK(interp.str() == "F(x1,x2) = x1*x2 + x2\n");
}

TEST_CASE("semantic comparison and refutation") {
  Interpretation none;
  std::mt19937_64 rng(3);
  CHECK(leq_semantic(none, parse_index_term("i"), parse_index_term("i + j")) == Verdict::Yes);
  CHECK(leq_semantic(none, parse_index_term("i * i"), parse_index_term("i")) == Verdict::Unknown);
  auto r = refute(none, parse_index_term("i * i"), parse_index_term("i"), rng);
  REQUIRE(r.has_value());
  CHECK(r->lhsValue > r->rhsValue);
  CHECK_FALSE(refute(none, parse_index_term("i"), parse_index_term("i * i"), rng).has_value());
}

TEST_CASE("property: polynomial normal form preserves the denotation") {
  std::mt19937_64 rng(4);
  std::vector<std::string> vars = {"i", "j"};
  for (int round = 0; round < 300; ++round) {
    IndexTerm t = random_index(rng, vars, 4);
    IndexTerm n = from_polynomial(to_polynomial(t, {}));
    CHECK_FALSE(n.mentions_symbol());
    for (int s = 0; s < 10; ++s) {
      Assignment alpha;
      alpha.values = {{"i", rng() % 10}, {"j", rng() % 10}};
      CHECK(evaluate(t, {}, alpha) == evaluate(n, {}, alpha));
    }
    // Printing then parsing keeps the meaning, and the text is stable.
    IndexTerm back = parse_index_term(to_string(t));
    CHECK(to_string(parse_index_term(to_string(back))) == to_string(back));
    Assignment alpha;
    alpha.values = {{"i", 3}, {"j", 7}};
    CHECK(evaluate(back, {}, alpha) == evaluate(t, {}, alpha));
  }
}
