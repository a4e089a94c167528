#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sizax/error.hpp"
#include "sizax/simple_type.hpp"
#include "sizax/sized_type.hpp"

namespace sizax {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Applicative terms. Every node carries its simple type once the program has
// been through simple_typecheck (before that `type` is default-constructed).
struct Term {
  enum class Kind { Var, Fun, Con, App };

  Kind kind = Kind::Var;
  std::string name;  // Var / Fun / Con
  TermPtr fn;        // App
  TermPtr arg;       // App
  SimpleType type;
  SourceLoc loc;

  static TermPtr var(std::string name, SourceLoc loc = {}, SimpleType type = {});
  static TermPtr fun(std::string name, SourceLoc loc = {}, SimpleType type = {});
  static TermPtr con(std::string name, SourceLoc loc = {}, SimpleType type = {});
  static TermPtr app(TermPtr fn, TermPtr arg, SourceLoc loc = {}, SimpleType type = {});

  bool is_app() const { return kind == Kind::App; }
  bool is_var() const { return kind == Kind::Var; }
};

// head a1 ... an
struct Spine {
  TermPtr head;
  std::vector<TermPtr> args;
};

Spine spine(const TermPtr& t);
TermPtr apply_spine(TermPtr head, const std::vector<TermPtr>& args);
void collect_vars(const TermPtr& t, std::vector<std::string>& ordered);  // first-occurrence order
std::set<std::string> term_vars(const TermPtr& t);

struct Pattern {
  enum class Kind { Var, Con };

  Kind kind = Kind::Var;
  std::string name;
  std::vector<Pattern> args;
  SimpleType type;
  SourceLoc loc;

  static Pattern var(std::string name, SourceLoc loc = {});
  static Pattern con(std::string name, std::vector<Pattern> args, SourceLoc loc = {});

  void collect_vars(std::vector<std::string>& out) const;
  TermPtr to_term() const;
};

struct Equation {
  std::string fun;
  std::vector<Pattern> lhs;
  TermPtr rhs;
  SourceLoc loc;

  std::vector<std::string> lhs_vars() const;
};

struct FunctionDef {
  std::string name;
  std::optional<SimpleType> signature;  // declared or, after typing, inferred
  std::optional<SizedType> sized;       // user sized-type annotation
  std::vector<Equation> equations;
  SourceLoc loc;
  // Auxiliary functions introduced by program transformations.
  bool lifted = false;
  bool costFree = false;

  size_t arity() const { return equations.empty() ? 0 : equations.front().lhs.size(); }
};

struct Constructor {
  std::string name;
  std::string datatype;
  std::vector<SimpleType> argTypes;
};

struct DataDecl {
  std::string name;
  std::vector<Constructor> constructors;
  SourceLoc loc;
};

struct Program {
  std::vector<DataDecl> datatypes;
  std::vector<FunctionDef> functions;
  bool typed = false;

  const FunctionDef* find(const std::string& name) const;
  FunctionDef* find(const std::string& name);
  bool is_function(const std::string& name) const { return find(name) != nullptr; }

  const Constructor* user_constructor(const std::string& name) const;
  bool is_datatype(const std::string& name) const;
  bool is_constructor(const std::string& name) const;
  size_t constructor_arity(const std::string& name) const;

  size_t equation_count() const;
};

bool is_builtin_constructor(const std::string& name);

// Simple type of a constructor when its result has type `result`; for
// builtins the element types are read off `result`.
std::vector<SimpleType> constructor_arg_types(const Program& p, const std::string& con, const SimpleType& result);

// Surface syntax, accepted by parse_program.
std::string print_term(const TermPtr& t);
std::string print_pattern(const Pattern& p);
std::string print_equation(const Equation& eq);
std::string print_program(const Program& p);

}  // namespace sizax
