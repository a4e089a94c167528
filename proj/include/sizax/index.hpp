#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sizax/polynomial.hpp"

namespace sizax {

// Index terms: variables, the fixed builtins 0 / s / + / *, and unknown
// index symbols whose meaning is chosen by an Interpretation.
struct IndexTerm {
  enum class Kind { Var, Zero, Succ, Plus, Mul, Sym };

  Kind kind = Kind::Zero;
  std::string name;  // Var and Sym
  std::vector<IndexTerm> args;

  static IndexTerm var(std::string name);
  static IndexTerm zero();
  static IndexTerm succ(IndexTerm t);
  static IndexTerm plus(IndexTerm a, IndexTerm b);
  static IndexTerm mul(IndexTerm a, IndexTerm b);
  static IndexTerm sym(std::string name, std::vector<IndexTerm> args);
  static IndexTerm numeral(unsigned n, IndexTerm base = zero());

  bool is_var() const { return kind == Kind::Var; }
  bool is_sym() const { return kind == Kind::Sym; }

  void collect_vars(std::set<std::string>& out) const;
  std::set<std::string> vars() const;
  void collect_symbols(std::map<std::string, size_t>& arities) const;
  bool mentions_symbol() const;
  bool contains_var(const std::string& v) const;

  bool operator==(const IndexTerm& o) const;
  bool operator!=(const IndexTerm& o) const { return !(*this == o); }
  bool operator<(const IndexTerm& o) const;
};

std::string to_string(const IndexTerm& t);

using IndexSubstitution = std::map<std::string, IndexTerm>;

IndexTerm substitute(const IndexTerm& t, const IndexSubstitution& theta);

// Total map from index variables to naturals; unlisted variables map to
// `fallback`.
struct Assignment {
  std::map<std::string, std::uint64_t> values;
  std::uint64_t fallback = 0;

  std::uint64_t operator()(const std::string& v) const {
    auto it = values.find(v);
    return it == values.end() ? fallback : it->second;
  }
};

// Meaning of one unknown symbol: a polynomial over the formal arguments
// x1..xk with natural coefficients.
struct SymbolInterpretation {
  size_t arity = 0;
  Polynomial poly;
};

std::string formal_argument(size_t i);  // "x1", "x2", ...

class Interpretation {
public:
  void set(const std::string& symbol, size_t arity, Polynomial poly);
  bool contains(const std::string& symbol) const { return table_.count(symbol) > 0; }
  const SymbolInterpretation& at(const std::string& symbol) const;
  const std::map<std::string, SymbolInterpretation>& table() const { return table_; }
  void merge(const Interpretation& other);
  bool empty() const { return table_.empty(); }

  // `F1(x1,x2) = x1 + x2` lines.
  std::string str() const;

private:
  std::map<std::string, SymbolInterpretation> table_;
};

// Composes the interpretation into the term; throws UnboundSymbol.
Polynomial to_polynomial(const IndexTerm& t, const Interpretation& interp);

// Rebuilds an index term (builtins only) that denotes the polynomial.
IndexTerm from_polynomial(const Polynomial& p);

std::uint64_t evaluate(const IndexTerm& t, const Interpretation& interp, const Assignment& alpha);

enum class Verdict { Yes, Unknown };

Verdict leq_semantic(const Interpretation& interp, const IndexTerm& lhs, const IndexTerm& rhs);

struct Refutation {
  Assignment alpha;
  std::uint64_t lhsValue = 0;
  std::uint64_t rhsValue = 0;
};

// Searches for an assignment violating lhs <= rhs: all assignments over
// 0..smallRange first (for few variables), then `samples` random ones over
// 0..range.
std::optional<Refutation> refute(const Interpretation& interp, const IndexTerm& lhs, const IndexTerm& rhs,
                                 std::mt19937_64& rng, unsigned samples = 1000, unsigned range = 20);

}  // namespace sizax
