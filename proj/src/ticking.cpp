#include "sizax/ticking.hpp"

#include <functional>
#include <set>
#include <tuple>

#include "sizax/program.hpp"

namespace sizax {

ClockType clock_type(const TickConfig& cfg) {
  if (cfg.freshClock) return {SimpleType::base("C#"), "Z#", "T#"};
  return {builtin::nat(), builtin::kZero, builtin::kSucc};
}

SimpleType tick_type(const SimpleType& t, const SimpleType& clock) {
  switch (t.kind) {
    case SimpleType::Kind::Base: {
      std::vector<SimpleType> args;
      for (const auto& a : t.args) args.push_back(tick_type(a, clock));
      return SimpleType::base(t.name, args);
    }
    case SimpleType::Kind::Product:
      return SimpleType::product(tick_type(t.left(), clock), tick_type(t.right(), clock));
    case SimpleType::Kind::Arrow:
      return SimpleType::arrow(tick_type(t.left(), clock),
                               SimpleType::arrow(clock, SimpleType::product(tick_type(t.right(), clock), clock)));
    default: return t;
  }
}

std::string ticked_name(const std::string& f) { return f + "#"; }

namespace {

// A continuation receives the value and the clock of what was evaluated so
// far and builds a term of the equation's result type. `final` marks the
// continuation that just pairs them up.
struct Kont {
  std::function<TermPtr(TermPtr, TermPtr)> build;
  bool final = false;
};

TermPtr pair_term(TermPtr a, TermPtr b) {
  return Term::app(Term::app(Term::con(builtin::kPair), std::move(a)), std::move(b));
}

TermPtr apply_all(TermPtr head, const std::vector<TermPtr>& args) {
  for (const auto& a : args) head = Term::app(head, a);
  return head;
}

class Ticker {
public:
  Ticker(const Program& src, const TickConfig& cfg) : src_(src), clock_(clock_type(cfg)) {}

  TickedProgram run() {
    TickedProgram out;
    out.clock = clock_;
    out_.datatypes = src_.datatypes;
    if (clock_.type.name != builtin::kNat)
      out_.datatypes.push_back(DataDecl{clock_.type.name,
                                        {Constructor{clock_.zero, clock_.type.name, {}},
                                         Constructor{clock_.tick, clock_.type.name, {clock_.type}}},
                                        {}});
    for (const auto& f : src_.functions) {
      out.names[f.name] = ticked_name(f.name);
      tick_function(f);
    }
    // Auxiliary functions go after the ticked ones.
    for (auto& f : extra_) out_.functions.push_back(std::move(f));
    out.program = std::move(out_);
    simple_typecheck(out.program);
    return out;
  }

private:
  SimpleType tick(const SimpleType& t) const { return tick_type(t, clock_.type); }
  SimpleType with_clock(const SimpleType& t) const { return SimpleType::product(t, clock_.type); }

  // <s1> -> .. -> <sk> -> C -> (<s> x C) for a k-ary function of type s1 -> .. -> sk -> s.
  SimpleType ticked_signature(const SimpleType& sig, size_t arity) const {
    auto [domains, result] = sig.uncurry(static_cast<int>(arity));
    std::vector<SimpleType> ds;
    for (const auto& d : domains) ds.push_back(tick(d));
    ds.push_back(clock_.type);
    return SimpleType::arrows(ds, with_clock(tick(result)));
  }

  void tick_function(const FunctionDef& f) {
    FunctionDef g;
    g.name = ticked_name(f.name);
    g.signature = ticked_signature(*f.signature, f.arity());
    g.loc = f.loc;
    g.lifted = f.lifted;
    g.costFree = f.costFree;
    SimpleType resultType = f.signature->uncurry(static_cast<int>(f.arity())).second;
    for (const auto& eq : f.equations) {
      current_ = g.name;
      scope_.clear();
      for (const auto& pat : eq.lhs) record_pattern(pat);
      std::string c = fresh("c");
      scope_[c] = clock_.type;
      resultPair_ = with_clock(tick(resultType));
      TermPtr clock = Term::var(c);
      if (!f.costFree) clock = Term::app(Term::con(clock_.tick), clock);
      Kont done{[](TermPtr v, TermPtr k) { return pair_term(std::move(v), std::move(k)); }, true};
      Equation out;
      out.fun = g.name;
      out.lhs = eq.lhs;
      out.lhs.push_back(Pattern::var(c));
      out.rhs = trans(eq.rhs, clock, done);
      out.loc = eq.loc;
      g.equations.push_back(std::move(out));
    }
    out_.functions.push_back(std::move(g));
  }

  void record_pattern(const Pattern& p) {
    if (p.kind == Pattern::Kind::Var) {
      scope_[p.name] = tick(p.type);
      return;
    }
    for (const auto& a : p.args) record_pattern(a);
  }

  std::string fresh(const std::string& stem) { return stem + "#" + std::to_string(++counter_); }

  TermPtr trans(const TermPtr& t, TermPtr clock, const Kont& k) {
    Spine s = spine(t);
    auto head = s.head;
    std::vector<TermPtr> args = s.args;
    return trans_args(args, 0, std::move(clock), {}, [this, head, k](std::vector<TermPtr> vals, TermPtr c) {
      return apply_head(head, vals, std::move(c), k);
    });
  }

  TermPtr trans_args(const std::vector<TermPtr>& args, size_t i, TermPtr clock, std::vector<TermPtr> acc,
                     const std::function<TermPtr(std::vector<TermPtr>, TermPtr)>& next) {
    if (i == args.size()) return next(std::move(acc), std::move(clock));
    Kont k{[this, &args, i, acc, &next](TermPtr v, TermPtr c) {
             std::vector<TermPtr> more = acc;
             more.push_back(std::move(v));
             return trans_args(args, i + 1, std::move(c), std::move(more), next);
           },
           false};
    return trans(args[i], std::move(clock), k);
  }

  TermPtr apply_head(const TermPtr& head, const std::vector<TermPtr>& vals, TermPtr clock, const Kont& k) {
    size_t n = vals.size();
    switch (head->kind) {
      case Term::Kind::Var:
        if (n == 0) return k.build(Term::var(head->name), std::move(clock));
        return call_value(Term::var(head->name), head->type, vals, 0, std::move(clock), k);
      case Term::Kind::Con: {
        size_t arity = src_.constructor_arity(head->name);
        if (n == arity) return k.build(apply_all(Term::con(head->name), vals), std::move(clock));
        SimpleType result = head->type.uncurry(static_cast<int>(arity)).second;
        return k.build(apply_all(Term::fun(constructor_wrapper(head->name, n, result, head->type)), vals),
                       std::move(clock));
      }
      case Term::Kind::Fun: {
        const FunctionDef& g = *src_.find(head->name);
        size_t arity = g.arity();
        if (n < arity) {
          std::string name = n + 1 == arity ? ticked_name(g.name) : function_wrapper(g, n);
          return k.build(apply_all(Term::fun(name), vals), std::move(clock));
        }
        std::vector<TermPtr> now(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(arity));
        std::vector<TermPtr> rest(vals.begin() + static_cast<std::ptrdiff_t>(arity), vals.end());
        TermPtr call = Term::app(apply_all(Term::fun(ticked_name(g.name)), now), clock);
        SimpleType remaining = g.signature->uncurry(static_cast<int>(arity)).second;
        if (rest.empty()) return bind(call, tick(remaining), k);
        Kont then{[this, remaining, rest, k](TermPtr r, TermPtr c) {
                    return call_value(std::move(r), remaining, rest, 0, std::move(c), k);
                  },
                  false};
        return bind(call, tick(remaining), then);
      }
      case Term::Kind::App: break;
    }
    throw Error(ErrorKind::Unsupported, "unexpected application head", head->loc);
  }

  // Applies a functional value of (original) type `type` to vals[i..], one
  // argument and one clock-threading call at a time.
  TermPtr call_value(TermPtr fn, const SimpleType& type, const std::vector<TermPtr>& vals, size_t i, TermPtr clock,
                     const Kont& k) {
    if (!type.is_arrow()) throw Error(ErrorKind::TypeMismatch, "applying a value of type " + to_string(type));
    TermPtr call = Term::app(Term::app(fn, vals[i]), clock);
    SimpleType rest = type.right();
    if (i + 1 == vals.size()) return bind(call, tick(rest), k);
    Kont then{[this, rest, &vals, i, k](TermPtr g, TermPtr c) {
                return call_value(std::move(g), rest, vals, i + 1, std::move(c), k);
              },
              false};
    return bind(call, tick(rest), then);
  }

  // `call` evaluates to a (value, clock) pair; continue with both.
  TermPtr bind(TermPtr call, const SimpleType& valueType, const Kont& k) {
    if (k.final) return call;
    std::string v = fresh("v"), c = fresh("c");
    scope_[v] = valueType;
    scope_[c] = clock_.type;
    TermPtr body = k.build(Term::var(v), Term::var(c));
    std::vector<std::string> used;
    collect_vars(body, used);
    FunctionDef aux;
    aux.name = current_ + "let" + std::to_string(++auxCounter_[current_]);
    aux.lifted = true;
    aux.costFree = true;
    Equation eq;
    eq.fun = aux.name;
    std::vector<SimpleType> domains;
    std::vector<TermPtr> params;
    for (const auto& u : used) {
      if (u == v || u == c) continue;
      eq.lhs.push_back(Pattern::var(u));
      domains.push_back(scope_.at(u));
      params.push_back(Term::var(u));
    }
    eq.lhs.push_back(Pattern::con(builtin::kPair, {Pattern::var(v), Pattern::var(c)}));
    domains.push_back(with_clock(valueType));
    eq.rhs = body;
    aux.signature = SimpleType::arrows(domains, resultPair_);
    aux.equations.push_back(std::move(eq));
    extra_.push_back(std::move(aux));
    return Term::app(apply_all(Term::fun(extra_.back().name), params), call);
  }

  // f#_m x1 .. xm y c = (f#_(m+1) x1 .. xm y, c), the last one being f# itself.
  std::string function_wrapper(const FunctionDef& g, size_t m) {
    std::string name = ticked_name(g.name) + "_" + std::to_string(m);
    if (!wrappers_.insert(name).second) return name;
    size_t arity = g.arity();
    std::string next = m + 2 == arity ? ticked_name(g.name) : function_wrapper(g, m + 1);
    auto [domains, result] = g.signature->uncurry(static_cast<int>(arity));
    SimpleType rest = SimpleType::arrows(std::vector<SimpleType>(domains.begin() + static_cast<std::ptrdiff_t>(m + 1),
                                                                 domains.end()),
                                         result);
    std::vector<SimpleType> ds;
    for (size_t i = 0; i <= m; ++i) ds.push_back(tick(domains[i]));
    ds.push_back(clock_.type);
    extra_.push_back(wrapper(name, m, ds, with_clock(tick(rest)), Term::fun(next)));
    return name;
  }

  // Same for constructors; the result type is part of the key since
  // builtin constructors are used at several types.
  std::string constructor_wrapper(const std::string& con, size_t m, const SimpleType& result,
                                  const SimpleType& conType) {
    auto key = std::make_tuple(con, m, to_string(result));
    if (auto it = conWrappers_.find(key); it != conWrappers_.end()) return it->second;
    std::string base = "con#" + con + "_" + std::to_string(m);
    std::string name = base;
    for (int n = 2; wrappers_.count(name); ++n) name = base + "_" + std::to_string(n);
    wrappers_.insert(name);
    conWrappers_[key] = name;
    size_t arity = src_.constructor_arity(con);
    auto [domains, res] = conType.uncurry(static_cast<int>(arity));
    bool last = m + 1 == arity;
    TermPtr next = last ? Term::con(con) : Term::fun(constructor_wrapper(con, m + 1, result, conType));
    SimpleType rest = SimpleType::arrows(
        std::vector<SimpleType>(domains.begin() + static_cast<std::ptrdiff_t>(m + 1), domains.end()), res);
    std::vector<SimpleType> ds;
    for (size_t i = 0; i <= m; ++i) ds.push_back(tick(domains[i]));
    ds.push_back(clock_.type);
    extra_.push_back(wrapper(name, m, ds, with_clock(tick(rest)), next));
    return name;
  }

  static FunctionDef wrapper(const std::string& name, size_t m, const std::vector<SimpleType>& domains,
                             const SimpleType& result, TermPtr next) {
    FunctionDef w;
    w.name = name;
    w.lifted = true;
    w.costFree = true;
    w.signature = SimpleType::arrows(domains, result);
    Equation eq;
    eq.fun = name;
    TermPtr body = next;
    for (size_t i = 0; i <= m; ++i) {
      std::string x = "x" + std::to_string(i + 1);
      eq.lhs.push_back(Pattern::var(x));
      body = Term::app(body, Term::var(x));
    }
    eq.lhs.push_back(Pattern::var("c"));
    eq.rhs = pair_term(body, Term::var("c"));
    w.equations.push_back(std::move(eq));
    return w;
  }

  const Program& src_;
  ClockType clock_;
  Program out_;
  std::vector<FunctionDef> extra_;
  std::set<std::string> wrappers_;
  std::map<std::tuple<std::string, size_t, std::string>, std::string> conWrappers_;
  std::map<std::string, SimpleType> scope_;
  std::map<std::string, int> auxCounter_;
  std::string current_;
  SimpleType resultPair_;
  int counter_ = 0;
};

}  // namespace

TickedProgram tick_program(const Program& p, const TickConfig& cfg) {
  if (!p.typed) throw Error(ErrorKind::Usage, "ticking needs a simply typed program");
  return Ticker(p, cfg).run();
}

std::optional<IndexTerm> clock_bound(const SizedType& tickedType) {
  SizedType t = tickedType;
  std::optional<std::string> clockVar;
  while (true) {
    while (t.is_forall()) t = t.body();
    if (!t.is_arrow()) break;
    SizedType d = t.dom();
    SizedType c = t.cod();
    while (c.is_forall()) c = c.body();
    if (!c.is_arrow()) {
      // d is the clock argument
      if (d.is_base() && d.index.kind == IndexTerm::Kind::Var) clockVar = d.index.name;
      t = c;
      break;
    }
    t = c;
  }
  if (!t.is_product() || !t.children[1].is_base()) return std::nullopt;
  IndexTerm bound = t.children[1].index;
  if (clockVar) bound = substitute(bound, IndexSubstitution{{*clockVar, IndexTerm::zero()}});
  return bound;
}

}  // namespace sizax
