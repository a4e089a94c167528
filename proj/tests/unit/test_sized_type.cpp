#include <doctest.h>

#include "sizax/parser.hpp"
#include "sizax/sized_type.hpp"
#include "support.hpp"

using namespace sizax;

namespace {

SizedType T(const std::string& s) { return parse_sized_type(s); }

}  // namespace

TEST_CASE("sized types print and parse back") {
  for (const char* s : {"forall i j. L i a -> L j a -> L (i+j) a", "forall i. Nat i -> Nat (2*i)",
                        "forall j. (forall i. Nat i -> Nat (i+1)) -> Nat j -> Nat (j+2)",
                        "forall i j. L i a -> L j a -> L (i*j) (a, a)", "Nat 0", "(Nat i, L j a)"}) {
    SizedType t = T(s);
    CHECK(parse_sized_type(to_string(t)) == t);
  }
  CHECK(to_string(T("forall i. Nat i -> Nat (i + 1)")) == "forall i. Nat i -> Nat (i+1)");
}

TEST_CASE("skeleton drops indices") {
  CHECK(to_string(skeleton(T("forall i j. L i a -> L j a -> L (i+j) a"))) == "List a -> List a -> List a");
}

TEST_CASE("free variables by polarity") {
  FreeVars fv = free_vars(T("(Nat i -> Nat j) -> Nat k"));
  CHECK(fv.positive == std::set<std::string>{"i", "k"});
  CHECK(fv.negative == std::set<std::string>{"j"});
  CHECK(sizax::fv(T("forall i. Nat i -> Nat (i + j)")) == std::set<std::string>{"j"});
}

TEST_CASE("canonical declarations") {
  CHECK(is_canonical(T("forall i j. L i a -> L j a -> L (i+j) a")));
  CHECK(is_canonical(T("forall j. (forall i. Nat i -> Nat (i+1)) -> Nat j -> Nat (j+2)")));
  CHECK(is_canonical(T("forall j k l. (forall i. a -> L i (a, a) -> L (i + j) (a, a)) -> L k (a, a) -> L l a -> L (l * j + k) (a, a)")));

  auto nonvar = is_canonical(T("forall i. Nat (2 * i) -> Nat i"));
  CHECK_FALSE(nonvar);
  CHECK(nonvar.diagnostic.find("non-variable index") != std::string::npos);

  auto repeated = is_canonical(T("forall i. Nat i -> Nat i -> Nat i"));
  CHECK_FALSE(repeated);
  CHECK(repeated.diagnostic.find("more than once") != std::string::npos);

  // A negative variable that is not bound where it is used.
  CHECK_FALSE(is_canonical(T("forall i. (Nat i -> Nat (i + 1)) -> Nat i -> Nat (i + 2)")));
}

TEST_CASE("substitution avoids capture") {
  SizedType t = T("forall i. Nat i -> Nat (i + j)");
  SizedType s = substitute(t, {{"j", IndexTerm::var("i")}});
  REQUIRE(s.is_forall());
  CHECK(s.bound.front() != "i");
  CHECK(sizax::fv(s) == std::set<std::string>{"i"});
  CHECK(alpha_equivalent(s, T("forall k. Nat k -> Nat (k + i)")));
}

TEST_CASE("alpha equivalence and instantiation") {
  CHECK(alpha_equivalent(T("forall i j. L i a -> L j a -> L (i+j) a"), T("forall p q. L p a -> L q a -> L (p+q) a")));
  CHECK_FALSE(alpha_equivalent(T("forall i j. L i a -> L j a -> L (i+j) a"), T("forall p q. L p a -> L q a -> L (q+q) a")));
  SizedType inst = instantiate(T("forall i j. Nat i -> Nat j -> Nat (i+j)"), {IndexTerm::zero(), IndexTerm::var("k")});
  CHECK(to_string(inst) == "Nat 0 -> Nat k -> Nat (0+k)");
  CHECK_THROWS_AS(instantiate(T("forall i. Nat i -> Nat i"), {}), Error);
}

TEST_CASE("name supply avoids reserved names") {
  NameSupply names;
  names.reserve(std::set<std::string>{"i", "i'"});
  std::string a = names.fresh("i"), b = names.fresh("i");
  CHECK(a != "i");
  CHECK(a != "i'");
  CHECK(a != b);
}

TEST_CASE("property: opening a quantifier gives fresh distinct names") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 100; ++round) {
    unsigned n = 1 + rng() % 4;
    std::vector<std::string> vars;
    SizedType body = SizedType::base("Nat", IndexTerm::zero());
    for (unsigned k = 0; k < n; ++k) vars.push_back("v" + std::to_string(k));
    for (unsigned k = n; k-- > 0;) body = SizedType::arrow(SizedType::base("Nat", IndexTerm::var(vars[k])), body);
    SizedType t = SizedType::forall(vars, body);
    NameSupply names;
    names.reserve(std::set<std::string>(vars.begin(), vars.end()));
    std::vector<std::string> renamed;
    SizedType opened = open_forall(t, names, &renamed);
    CHECK(renamed.size() == n);
    for (const auto& r : renamed) CHECK(std::find(vars.begin(), vars.end(), r) == vars.end());
    CHECK(alpha_equivalent(SizedType::forall(renamed, opened), t));
    CHECK(is_canonical(t));
  }
}
