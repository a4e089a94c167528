#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "sizax/index.hpp"
#include "sizax/simple_type.hpp"

namespace sizax {

// Sized types: indexed base types B_a, unsized atoms, products, arrows whose
// domain may be any type, and quantification over index variables. A
// monotype never has Forall at its root; a polytype is Forall over an arrow.
struct SizedType {
  enum class Kind { Base, Atom, Product, Arrow, Forall };

  Kind kind = Kind::Atom;
  std::string name;                  // Base and Atom
  std::vector<SimpleType> typeArgs;  // Base: unsized element types
  IndexTerm index;                   // Base
  std::vector<SizedType> children;   // Product/Arrow: two; Forall: body
  std::vector<std::string> bound;    // Forall

  static SizedType base(std::string name, IndexTerm index, std::vector<SimpleType> typeArgs = {});
  static SizedType atom(std::string name);
  static SizedType product(SizedType left, SizedType right);
  static SizedType arrow(SizedType dom, SizedType cod);
  // Returns `body` unchanged when `vars` is empty.
  static SizedType forall(std::vector<std::string> vars, SizedType body);

  bool is_forall() const { return kind == Kind::Forall; }
  bool is_arrow() const { return kind == Kind::Arrow; }
  bool is_base() const { return kind == Kind::Base; }
  bool is_product() const { return kind == Kind::Product; }

  const SizedType& dom() const { return children[0]; }
  const SizedType& cod() const { return children[1]; }
  const SizedType& body() const { return children[0]; }

  // The body of a Forall, or the type itself.
  const SizedType& unquantified() const { return is_forall() ? body() : *this; }

  bool operator==(const SizedType& o) const;
  bool operator!=(const SizedType& o) const { return !(*this == o); }
};

std::string to_string(const SizedType& t);

SimpleType skeleton(const SizedType& t);

struct FreeVars {
  std::set<std::string> positive;
  std::set<std::string> negative;
  std::set<std::string> all() const;
};

FreeVars free_vars(const SizedType& t);
std::set<std::string> fv(const SizedType& t);
std::set<std::string> fnv(const SizedType& t);

// Generates index variable names that do not occur in `avoid` and were not
// handed out before. Names keep the requested stem: i, i', i'', i'3 ...
class NameSupply {
public:
  std::string fresh(const std::string& stem = "i");
  void reserve(const std::set<std::string>& names) { used_.insert(names.begin(), names.end()); }
  void reserve(const std::string& name) { used_.insert(name); }

private:
  std::set<std::string> used_;
};

// Capture-avoiding substitution of free index variables.
SizedType substitute(const SizedType& t, const IndexSubstitution& theta, NameSupply& names);
SizedType substitute(const SizedType& t, const IndexSubstitution& theta);

// Renames the outermost bound variables to fresh names and returns the body;
// `renamed` receives the fresh names in binder order.
SizedType open_forall(const SizedType& t, NameSupply& names, std::vector<std::string>* renamed = nullptr);

// Replaces the outer quantified variables by `args`; throws ArityMismatch.
SizedType instantiate(const SizedType& t, const std::vector<IndexTerm>& args);

struct CanonicityResult {
  bool canonical = true;
  std::string diagnostic;
  explicit operator bool() const { return canonical; }
};

CanonicityResult is_canonical(const SizedType& t);

bool alpha_equivalent(const SizedType& a, const SizedType& b);

// Every index variable name occurring in the type, bound or free.
void collect_all_names(const SizedType& t, std::set<std::string>& out);

// Applies the substitution to every index term in the type without
// touching binders (callers guarantee no capture).
SizedType map_indices(const SizedType& t, const std::function<IndexTerm(const IndexTerm&)>& f);

}  // namespace sizax
