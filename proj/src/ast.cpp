#include "sizax/ast.hpp"

#include <algorithm>
#include <sstream>

namespace sizax {

TermPtr Term::var(std::string name, SourceLoc loc, SimpleType type) {
  return std::make_shared<Term>(Term{Kind::Var, std::move(name), nullptr, nullptr, std::move(type), loc});
}
TermPtr Term::fun(std::string name, SourceLoc loc, SimpleType type) {
  return std::make_shared<Term>(Term{Kind::Fun, std::move(name), nullptr, nullptr, std::move(type), loc});
}
TermPtr Term::con(std::string name, SourceLoc loc, SimpleType type) {
  return std::make_shared<Term>(Term{Kind::Con, std::move(name), nullptr, nullptr, std::move(type), loc});
}
TermPtr Term::app(TermPtr fn, TermPtr arg, SourceLoc loc, SimpleType type) {
  return std::make_shared<Term>(Term{Kind::App, "", std::move(fn), std::move(arg), std::move(type), loc});
}

Spine spine(const TermPtr& t) {
  Spine s;
  TermPtr cur = t;
  while (cur->is_app()) {
    s.args.push_back(cur->arg);
    cur = cur->fn;
  }
  std::reverse(s.args.begin(), s.args.end());
  s.head = cur;
  return s;
}

TermPtr apply_spine(TermPtr head, const std::vector<TermPtr>& args) {
  for (const auto& a : args) head = Term::app(head, a, head->loc);
  return head;
}

void collect_vars(const TermPtr& t, std::vector<std::string>& ordered) {
  if (t->is_app()) {
    collect_vars(t->fn, ordered);
    collect_vars(t->arg, ordered);
  } else if (t->is_var() && std::find(ordered.begin(), ordered.end(), t->name) == ordered.end()) {
    ordered.push_back(t->name);
  }
}

std::set<std::string> term_vars(const TermPtr& t) {
  std::vector<std::string> v;
  collect_vars(t, v);
  return {v.begin(), v.end()};
}

Pattern Pattern::var(std::string name, SourceLoc loc) {
  Pattern p;
  p.kind = Kind::Var;
  p.name = std::move(name);
  p.loc = loc;
  return p;
}

Pattern Pattern::con(std::string name, std::vector<Pattern> args, SourceLoc loc) {
  Pattern p;
  p.kind = Kind::Con;
  p.name = std::move(name);
  p.args = std::move(args);
  p.loc = loc;
  return p;
}

void Pattern::collect_vars(std::vector<std::string>& out) const {
  if (kind == Kind::Var) out.push_back(name);
  for (const auto& a : args) a.collect_vars(out);
}

TermPtr Pattern::to_term() const {
  if (kind == Kind::Var) return Term::var(name, loc, type);
  TermPtr t = Term::con(name, loc);
  for (const auto& a : args) t = Term::app(t, a.to_term(), loc);
  // Only the outer node is annotated; callers needing full types retype.
  auto annotated = std::make_shared<Term>(*t);
  annotated->type = type;
  return annotated;
}

std::vector<std::string> Equation::lhs_vars() const {
  std::vector<std::string> out;
  for (const auto& p : lhs) p.collect_vars(out);
  return out;
}

const FunctionDef* Program::find(const std::string& name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

FunctionDef* Program::find(const std::string& name) {
  for (auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

const Constructor* Program::user_constructor(const std::string& name) const {
  for (const auto& d : datatypes)
    for (const auto& c : d.constructors)
      if (c.name == name) return &c;
  return nullptr;
}

bool Program::is_datatype(const std::string& name) const {
  if (name == builtin::kNat || name == builtin::kList) return true;
  return std::any_of(datatypes.begin(), datatypes.end(), [&](const DataDecl& d) { return d.name == name; });
}

bool is_builtin_constructor(const std::string& name) {
  return name == builtin::kZero || name == builtin::kSucc || name == builtin::kNil || name == builtin::kCons ||
         name == builtin::kPair;
}

bool Program::is_constructor(const std::string& name) const {
  return is_builtin_constructor(name) || user_constructor(name) != nullptr;
}

size_t Program::constructor_arity(const std::string& name) const {
  if (name == builtin::kZero || name == builtin::kNil) return 0;
  if (name == builtin::kSucc) return 1;
  if (name == builtin::kCons || name == builtin::kPair) return 2;
  if (const auto* c = user_constructor(name)) return c->argTypes.size();
  throw Error(ErrorKind::UnknownIdentifier, "unknown constructor " + name);
}

size_t Program::equation_count() const {
  size_t n = 0;
  for (const auto& f : functions) n += f.equations.size();
  return n;
}

std::vector<SimpleType> constructor_arg_types(const Program& p, const std::string& con, const SimpleType& result) {
  if (con == builtin::kZero || con == builtin::kNil) return {};
  if (con == builtin::kSucc) return {builtin::nat()};
  if (con == builtin::kCons) return {result.args.at(0), result};
  if (con == builtin::kPair) {
    if (result.kind != SimpleType::Kind::Product)
      throw Error(ErrorKind::TypeMismatch, "pair constructor at non-product type " + to_string(result));
    return {result.left(), result.right()};
  }
  if (const auto* c = p.user_constructor(con)) return c->argTypes;
  throw Error(ErrorKind::UnknownIdentifier, "unknown constructor " + con);
}

namespace {

// 0: cons chain, 1: application, 2: atomic
std::string render(const TermPtr& t, int prec);

bool is_numeral(const TermPtr& t, unsigned& n) {
  n = 0;
  TermPtr cur = t;
  while (true) {
    if (cur->kind == Term::Kind::Con && cur->name == builtin::kZero) return true;
    Spine s = spine(cur);
    if (s.head->kind != Term::Kind::Con || s.head->name != builtin::kSucc || s.args.size() != 1) return false;
    ++n;
    cur = s.args[0];
  }
}

std::string paren(const std::string& s, bool wrap) { return wrap ? "(" + s + ")" : s; }

std::string render(const TermPtr& t, int prec) {
  unsigned n = 0;
  if (is_numeral(t, n)) return std::to_string(n);
  Spine s = spine(t);
  const TermPtr& h = s.head;
  if (h->kind == Term::Kind::Con) {
    if (h->name == builtin::kNil && s.args.empty()) return "[]";
    if (h->name == builtin::kCons && s.args.size() == 2)
      return paren(render(s.args[0], 1) + " : " + render(s.args[1], 0), prec > 0);
    if (h->name == builtin::kPair && s.args.size() == 2)
      return "(" + render(s.args[0], 0) + ", " + render(s.args[1], 0) + ")";
  }
  if (s.args.empty()) return h->name;
  std::string out = h->name;
  for (const auto& a : s.args) out += " " + render(a, 2);
  return paren(out, prec > 1);
}

std::string render_pattern(const Pattern& p, int prec) {
  if (p.kind == Pattern::Kind::Var) return p.name;
  if (p.name == builtin::kZero) return "0";
  if (p.name == builtin::kNil) return "[]";
  if (p.name == builtin::kCons && p.args.size() == 2)
    return paren(render_pattern(p.args[0], 1) + " : " + render_pattern(p.args[1], 0), prec > 0);
  if (p.name == builtin::kPair && p.args.size() == 2)
    return "(" + render_pattern(p.args[0], 0) + ", " + render_pattern(p.args[1], 0) + ")";
  if (p.args.empty()) return p.name;
  std::string out = p.name;
  for (const auto& a : p.args) out += " " + render_pattern(a, 2);
  return paren(out, prec > 1);
}

}  // namespace

std::string print_term(const TermPtr& t) { return render(t, 0); }

std::string print_pattern(const Pattern& p) { return render_pattern(p, 2); }

std::string print_equation(const Equation& eq) {
  std::string out = eq.fun;
  for (const auto& p : eq.lhs) out += " " + print_pattern(p);
  return out + " = " + print_term(eq.rhs);
}

std::string print_program(const Program& p) {
  std::ostringstream out;
  for (const auto& d : p.datatypes) {
    out << "data " << d.name << " =";
    for (size_t i = 0; i < d.constructors.size(); ++i) {
      out << (i ? " |" : "") << " " << d.constructors[i].name;
      for (const auto& a : d.constructors[i].argTypes) {
        bool simple = a.kind == SimpleType::Kind::Atom || (a.kind == SimpleType::Kind::Base && a.args.empty());
        out << " " << paren(to_string(a), !simple);
      }
    }
    out << "\n";
  }
  if (!p.datatypes.empty()) out << "\n";
  for (size_t i = 0; i < p.functions.size(); ++i) {
    const auto& f = p.functions[i];
    if (i) out << "\n";
    if (f.signature) out << f.name << " :: " << to_string(*f.signature) << "\n";
    if (f.sized) out << f.name << " ::: " << to_string(*f.sized) << "\n";
    for (const auto& eq : f.equations) out << print_equation(eq) << "\n";
  }
  return out.str();
}

}  // namespace sizax
