#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <doctest.h>

#include "sizax/pipeline.hpp"

namespace doctest {
template <>
struct StringMaker<sizax::IndexTerm> {
  static String convert(const sizax::IndexTerm& t) { return sizax::to_string(t).c_str(); }
};
template <>
struct StringMaker<sizax::SizedType> {
  static String convert(const sizax::SizedType& t) { return sizax::to_string(t).c_str(); }
};
template <>
struct StringMaker<sizax::Polynomial> {
  static String convert(const sizax::Polynomial& p) { return sizax::to_string(p).c_str(); }
};
}  // namespace doctest

namespace testing {

inline std::string corpus_source(const std::string& name) {
  std::ifstream in(std::string(SIZAX_CORPUS) + "/" + name + ".fp");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline sizax::Program corpus_program(const std::string& name) { return sizax::load_program(corpus_source(name)); }

inline const char* const kCorpus[] = {"append", "arith",  "evenodd", "isort", "length", "map",
                                      "product", "reverse", "sum",    "tree",  "twice"};

// Random polynomial over the given variables with small natural
// coefficients (negative ones too when `signedCoefficients`).
inline sizax::Polynomial random_polynomial(std::mt19937_64& rng, const std::vector<std::string>& vars,
                                           unsigned maxDegree, bool signedCoefficients = false) {
  std::uniform_int_distribution<int> coeff(signedCoefficients ? -3 : 0, 3);
  sizax::Polynomial p;
  for (const auto& m : sizax::monomials_up_to(vars, maxDegree))
    if (rng() % 2) p.add_term(m, coeff(rng));
  return p;
}

}  // namespace testing
