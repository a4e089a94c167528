#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sizax/error.hpp"
#include "sizax/index.hpp"

namespace sizax {

struct Origin {
  SourceLoc loc;
  std::string function;
  std::string rule;

  std::string str() const;
};

// lhs <= rhs over the naturals, for all values of the free variables.
struct Constraint {
  IndexTerm lhs;
  IndexTerm rhs;
  Origin origin;
  int scc = -1;  // solver group, once partitioned

  std::string str() const;
};

class ConstraintSet {
public:
  void add(Constraint c);
  void merge(const ConstraintSet& other);

  // Makes a symbol known even if no constraint mentions it.
  void declare_symbol(const std::string& name, size_t arity, const std::string& owner = "");

  const std::vector<Constraint>& constraints() const { return constraints_; }
  std::vector<Constraint>& constraints() { return constraints_; }
  size_t size() const { return constraints_.size(); }
  bool empty() const { return constraints_.empty(); }

  const std::map<std::string, size_t>& arities() const { return arities_; }
  const std::map<std::string, std::string>& owners() const { return owners_; }
  // rhs symbol -> symbols of the lhs it must dominate, and the other rhs
  // symbols of the same constraint
  const std::map<std::string, std::set<std::string>>& dependencies() const { return deps_; }
  std::vector<std::string> symbols() const;  // declaration order

private:
  void note_symbols(const Constraint& c);

  std::vector<Constraint> constraints_;
  std::map<std::string, size_t> arities_;
  std::map<std::string, std::string> owners_;
  std::map<std::string, std::set<std::string>> deps_;
  std::vector<std::string> order_;
};

// `lhs <= rhs ; origin` lines under `-- scc N` headers.
std::string export_constraints(const ConstraintSet& cs);
ConstraintSet import_constraints(const std::string& text);

}  // namespace sizax
