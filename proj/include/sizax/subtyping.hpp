#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sizax/constraint.hpp"
#include "sizax/program.hpp"
#include "sizax/sized_type.hpp"

namespace sizax {

struct FallbackSymbol {
  std::string name;
  size_t arity = 0;
};

// Instantiation state for checking one equation. Rigid variables stand for
// arbitrary sizes; flexible variables are instantiations still to be chosen.
// Each variable carries a level: a flexible variable may only be bound to
// terms whose rigid variables are at its level or below, which is how
// generalization (the sup side of a quantifier) is kept from leaking.
//
// Index comparisons that matching cannot settle are deferred as
// constraints. Flexible variables still unbound when their scope closes
// are instantiated with a fresh unknown symbol over the rigid variables in
// scope.
class Instantiation {
public:
  Instantiation(NameSupply& names, std::function<std::string()> freshSymbol);

  std::string rigid(const std::string& stem, int level);
  void register_rigid(const std::string& name, int level);
  std::string flexible(const std::string& stem, int level);

  // Marks the current point; scopes close everything created after it.
  size_t mark() const { return order_.size(); }

  IndexTerm resolve(const IndexTerm& t) const;
  SizedType resolve(const SizedType& t) const;

  // Opens the outer quantifier with flexible variables.
  SizedType open_flexible(const SizedType& t, int level, std::vector<std::string>* opened = nullptr);
  SizedType open_rigid(const SizedType& t, int level);

  // sub <= sup; throws SkeletonMismatch when the shapes disagree.
  void subtype(const SizedType& sub, const SizedType& sup, int level, const Origin& origin);

  // End of an application spine at `level`: unbound flexible variables
  // created since `from` are generalized when they occur negatively in the
  // result and otherwise fall back to an unknown symbol if anything refers
  // to them.
  SizedType close_spine(const SizedType& result, size_t from, int level);

  // End of a rigid scope or of the equation.
  void close_scope(size_t from, int level);

  std::vector<Constraint> constraints() const;  // resolved
  const std::vector<FallbackSymbol>& fallbacks() const { return fallbacks_; }
  // A variable bound at its first (leftmost) occurrence whose later
  // occurrence could only be compared by a constraint.
  const std::vector<Diagnostic>& warnings() const { return warnings_; }

private:
  struct Var {
    bool flexible = false;
    int level = 0;
    bool active = true;
    bool hasBinding = false;
    IndexTerm binding;
  };

  Var* lookup(const std::string& name);
  const Var* lookup(const std::string& name) const;
  bool unbound_flexible(const IndexTerm& t) const;
  bool try_bind(const std::string& v, const IndexTerm& t);
  bool unify(const IndexTerm& a, const IndexTerm& b);
  void index_leq(const IndexTerm& a, const IndexTerm& b, const Origin& origin);
  void fallback(const std::string& v);
  bool mentioned_in_deferred(const std::string& v) const;

  NameSupply& names_;
  std::function<std::string()> freshSymbol_;
  std::map<std::string, Var> vars_;
  std::vector<std::string> order_;
  std::vector<Constraint> deferred_;
  std::vector<FallbackSymbol> fallbacks_;
  std::vector<Diagnostic> warnings_;
};

// Constraints under which sub <= sup holds, free variables read as rigid.
// Leftover instantiations become fresh symbols `J<n>`.
ConstraintSet subtype_constraints(const SizedType& sub, const SizedType& sup);

}  // namespace sizax
