#include <functional>
#include <map>

#include "sizax/program.hpp"

namespace sizax {

namespace {

bool contains_meta(const SimpleType& t) {
  if (t.kind == SimpleType::Kind::Meta) return true;
  for (const auto& a : t.args)
    if (contains_meta(a)) return true;
  return false;
}

class Unifier {
public:
  SimpleType fresh() { return SimpleType::meta(next_++); }

  SimpleType shallow(SimpleType t) const {
    while (t.kind == SimpleType::Kind::Meta) {
      auto it = bindings_.find(t.name);
      if (it == bindings_.end()) break;
      t = it->second;
    }
    return t;
  }

  SimpleType zonk(const SimpleType& t) const {
    SimpleType s = shallow(t);
    for (auto& a : s.args) a = zonk(a);
    return s;
  }

  void unify(const SimpleType& a0, const SimpleType& b0, SourceLoc loc) {
    SimpleType a = shallow(a0), b = shallow(b0);
    using K = SimpleType::Kind;
    if (a.kind == K::Meta && b.kind == K::Meta && a.name == b.name) return;
    if (a.kind == K::Meta) return bind(a, b, loc);
    if (b.kind == K::Meta) return bind(b, a, loc);
    if (a.kind != b.kind || a.name != b.name || a.args.size() != b.args.size()) mismatch(a, b, loc);
    for (size_t i = 0; i < a.args.size(); ++i) unify(a.args[i], b.args[i], loc);
  }

private:
  bool occurs(const std::string& meta, const SimpleType& t) const {
    SimpleType s = shallow(t);
    if (s.kind == SimpleType::Kind::Meta) return s.name == meta;
    for (const auto& a : s.args)
      if (occurs(meta, a)) return true;
    return false;
  }

  void bind(const SimpleType& meta, const SimpleType& t, SourceLoc loc) {
    if (occurs(meta.name, t)) mismatch(meta, t, loc);
    bindings_[meta.name] = t;
  }

  [[noreturn]] void mismatch(const SimpleType& a, const SimpleType& b, SourceLoc loc) const {
    throw Error(ErrorKind::TypeMismatch,
                "cannot match " + to_string(zonk(a)) + " with " + to_string(zonk(b)), loc);
  }

  std::map<std::string, SimpleType> bindings_;
  int next_ = 0;
};

class SimpleChecker {
public:
  explicit SimpleChecker(Program& p) : p_(p) {}

  void run() {
    for (auto& f : p_.functions) {
      if (!f.signature && f.sized) f.signature = skeleton(*f.sized);
      if (f.signature) {
        check_wellkinded(*f.signature, f.loc);
        funTypes_[f.name] = *f.signature;
      } else {
        funTypes_[f.name] = u_.fresh();
      }
    }
    for (auto& f : p_.functions)
      for (auto& eq : f.equations) infer_equation(f, eq);
    for (auto& f : p_.functions) {
      SimpleType t = u_.zonk(funTypes_[f.name]);
      if (contains_meta(t))
        throw Error(ErrorKind::TypeMismatch, "cannot determine a monomorphic type for " + f.name + "; add a signature",
                    f.loc);
      f.signature = t;
      for (auto& eq : f.equations) {
        for (auto& pat : eq.lhs) zonk_pattern(pat, f);
        eq.rhs = zonk_term(eq.rhs, f);
      }
    }
    p_.typed = true;
  }

private:
  void check_wellkinded(const SimpleType& t, SourceLoc loc) {
    if (t.kind == SimpleType::Kind::Base) {
      if (!p_.is_datatype(t.name)) throw Error(ErrorKind::UnknownIdentifier, "unknown datatype " + t.name, loc);
      size_t expected = t.name == builtin::kList ? 1 : 0;
      if (t.args.size() != expected)
        throw Error(ErrorKind::TypeMismatch, "datatype " + t.name + " applied to wrong number of types", loc);
    }
    for (const auto& a : t.args) check_wellkinded(a, loc);
  }

  SimpleType constructor_type(const std::string& name, SourceLoc loc) {
    using namespace builtin;
    if (name == kZero) return nat();
    if (name == kSucc) return SimpleType::arrow(nat(), nat());
    if (name == kNil) return list(u_.fresh());
    if (name == kCons) {
      SimpleType e = u_.fresh();
      return SimpleType::arrows({e, list(e)}, list(e));
    }
    if (name == kPair) {
      SimpleType a = u_.fresh(), b = u_.fresh();
      return SimpleType::arrows({a, b}, SimpleType::product(a, b));
    }
    if (const auto* c = p_.user_constructor(name)) return SimpleType::arrows(c->argTypes, SimpleType::base(c->datatype));
    throw Error(ErrorKind::UnknownIdentifier, "unknown constructor " + name, loc);
  }

  using Env = std::map<std::string, SimpleType>;

  SimpleType infer_pattern(Pattern& pat, Env& env) {
    if (pat.kind == Pattern::Kind::Var) {
      pat.type = u_.fresh();
      env[pat.name] = pat.type;
      return pat.type;
    }
    SimpleType ct = constructor_type(pat.name, pat.loc);
    auto [doms, result] = ct.uncurry();
    if (doms.size() != pat.args.size())
      throw Error(ErrorKind::WellFormedness, "constructor " + pat.name + " is not fully applied in a pattern",
                  pat.loc);
    for (size_t i = 0; i < doms.size(); ++i) u_.unify(infer_pattern(pat.args[i], env), doms[i], pat.args[i].loc);
    pat.type = result;
    return result;
  }

  TermPtr infer_term(const TermPtr& t, const Env& env) {
    switch (t->kind) {
      case Term::Kind::Var: {
        auto it = env.find(t->name);
        if (it == env.end()) throw Error(ErrorKind::UnknownIdentifier, "unbound variable " + t->name, t->loc);
        return Term::var(t->name, t->loc, it->second);
      }
      case Term::Kind::Fun: {
        auto it = funTypes_.find(t->name);
        if (it == funTypes_.end()) throw Error(ErrorKind::UnknownIdentifier, "unknown function " + t->name, t->loc);
        return Term::fun(t->name, t->loc, it->second);
      }
      case Term::Kind::Con:
        return Term::con(t->name, t->loc, constructor_type(t->name, t->loc));
      case Term::Kind::App: {
        TermPtr fn = infer_term(t->fn, env);
        TermPtr arg = infer_term(t->arg, env);
        SimpleType result = u_.fresh();
        u_.unify(fn->type, SimpleType::arrow(arg->type, result), t->loc);
        return Term::app(fn, arg, t->loc, result);
      }
    }
    return t;
  }

  void infer_equation(FunctionDef& f, Equation& eq) {
    std::vector<SimpleType> doms;
    for (size_t i = 0; i < eq.lhs.size(); ++i) doms.push_back(u_.fresh());
    SimpleType result = u_.fresh();
    u_.unify(funTypes_[f.name], SimpleType::arrows(doms, result), eq.loc);
    Env env;
    for (size_t i = 0; i < eq.lhs.size(); ++i) u_.unify(infer_pattern(eq.lhs[i], env), doms[i], eq.lhs[i].loc);
    eq.rhs = infer_term(eq.rhs, env);
    u_.unify(eq.rhs->type, result, eq.rhs->loc);
  }

  SimpleType final_type(const SimpleType& t, const FunctionDef& f, SourceLoc loc) {
    SimpleType z = u_.zonk(t);
    if (contains_meta(z))
      throw Error(ErrorKind::TypeMismatch, "ambiguous type " + to_string(z) + " in " + f.name, loc);
    return z;
  }

  void zonk_pattern(Pattern& pat, const FunctionDef& f) {
    pat.type = final_type(pat.type, f, pat.loc);
    for (auto& a : pat.args) zonk_pattern(a, f);
  }

  TermPtr zonk_term(const TermPtr& t, const FunctionDef& f) {
    auto copy = std::make_shared<Term>(*t);
    copy->type = final_type(t->type, f, t->loc);
    if (t->is_app()) {
      copy->fn = zonk_term(t->fn, f);
      copy->arg = zonk_term(t->arg, f);
    }
    return copy;
  }

  Program& p_;
  Unifier u_;
  std::map<std::string, SimpleType> funTypes_;
};

}  // namespace

void simple_typecheck(Program& p) {
  for (const auto& d : p.datatypes)
    for (const auto& c : d.constructors)
      for (const auto& a : c.argTypes) {
        if (a.kind == SimpleType::Kind::Arrow)
          throw Error(ErrorKind::Unsupported, "constructor " + c.name + " has a functional argument", d.loc);
        if (a.kind == SimpleType::Kind::Base && !p.is_datatype(a.name))
          throw Error(ErrorKind::UnknownIdentifier, "unknown datatype " + a.name, d.loc);
      }
  SimpleChecker(p).run();
}

}  // namespace sizax
