#include "sizax/interpreter.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_map>

namespace sizax {

ValuePtr Value::data(std::string name, std::vector<ValuePtr> args) {
  auto v = std::make_shared<Value>();
  v->kind = Kind::Data;
  v->name = std::move(name);
  v->args = std::move(args);
  return v;
}

ValuePtr Value::partial(std::string name, std::vector<ValuePtr> args) {
  auto v = std::make_shared<Value>();
  v->kind = Kind::Partial;
  v->name = std::move(name);
  v->args = std::move(args);
  return v;
}

ValuePtr Value::nat(unsigned n) {
  ValuePtr v = data(builtin::kZero);
  for (unsigned i = 0; i < n; ++i) v = data(builtin::kSucc, {v});
  return v;
}

ValuePtr Value::list(const std::vector<ValuePtr>& elements) {
  ValuePtr v = data(builtin::kNil);
  for (auto it = elements.rbegin(); it != elements.rend(); ++it) v = data(builtin::kCons, {*it, v});
  return v;
}

ValuePtr Value::pair(ValuePtr a, ValuePtr b) { return data(builtin::kPair, {std::move(a), std::move(b)}); }

bool operator==(const Value& a, const Value& b) {
  if (a.kind != b.kind || a.name != b.name || a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!(*a.args[i] == *b.args[i])) return false;
  return true;
}

namespace {

// Succ^n 0 as n, otherwise nothing.
std::optional<unsigned> as_numeral(const Value* v) {
  unsigned n = 0;
  while (v->kind == Value::Kind::Data && v->name == builtin::kSucc && v->args.size() == 1) {
    ++n;
    v = v->args[0].get();
  }
  if (v->kind == Value::Kind::Data && v->name == builtin::kZero) return n;
  return std::nullopt;
}

bool is_list(const Value* v, std::vector<const Value*>& elements) {
  while (v->kind == Value::Kind::Data && v->name == builtin::kCons && v->args.size() == 2) {
    elements.push_back(v->args[0].get());
    v = v->args[1].get();
  }
  return v->kind == Value::Kind::Data && v->name == builtin::kNil;
}

std::string show(const Value* v, bool atomic) {
  if (auto n = as_numeral(v)) return std::to_string(*n);
  std::vector<const Value*> elements;
  if (is_list(v, elements)) {
    std::string s = "[";
    for (size_t i = 0; i < elements.size(); ++i) s += (i ? ", " : "") + show(elements[i], false);
    return s + "]";
  }
  if (v->kind == Value::Kind::Data && v->name == builtin::kPair && v->args.size() == 2)
    return "(" + show(v->args[0].get(), false) + ", " + show(v->args[1].get(), false) + ")";
  std::string name = v->name == builtin::kCons ? "(:)" : v->name == builtin::kPair ? "(,)" : v->name;
  if (v->args.empty()) return name;
  std::string s = name;
  for (const auto& a : v->args) s += " " + show(a.get(), true);
  return atomic ? "(" + s + ")" : s;
}

}  // namespace

std::string to_string(const Value& v) { return show(&v, false); }
std::string to_string(const ValuePtr& v) { return v ? show(v.get(), false) : "<none>"; }

TermPtr to_term(const ValuePtr& v) {
  bool constructor = v->kind == Value::Kind::Data || std::isupper(static_cast<unsigned char>(v->name[0])) ||
                     v->name == builtin::kZero;
  TermPtr head = constructor ? Term::con(v->name) : Term::fun(v->name);
  for (const auto& a : v->args) head = Term::app(head, to_term(a));
  return head;
}

ValuePtr to_value(const TermPtr& t) {
  Spine s = spine(t);
  if (s.head->kind != Term::Kind::Con)
    throw Error(ErrorKind::NotData, "not a constructor term: " + print_term(t), t->loc);
  std::vector<ValuePtr> args;
  for (const auto& a : s.args) args.push_back(to_value(a));
  return Value::data(s.head->name, std::move(args));
}

// ---- the machine ----

namespace {

using Env = std::map<std::string, ValuePtr>;
using EnvPtr = std::shared_ptr<const Env>;

bool match(const Pattern& pat, const ValuePtr& v, Env& env) {
  if (pat.kind == Pattern::Kind::Var) {
    env[pat.name] = v;
    return true;
  }
  if (v->kind != Value::Kind::Data || v->name != pat.name || v->args.size() != pat.args.size()) return false;
  for (size_t i = 0; i < pat.args.size(); ++i)
    if (!match(pat.args[i], v->args[i], env)) return false;
  return true;
}

class Machine {
public:
  Machine(const Program& p, std::uint64_t fuel) : p_(p), fuel_(fuel) {
    for (const auto& f : p.functions) functions_[f.name] = &f;
  }

  EvalResult run_term(const TermPtr& t) {
    control_ = Control{t, std::make_shared<const Env>(), nullptr};
    return loop();
  }

  EvalResult run_call(const std::string& f, const std::vector<ValuePtr>& args) {
    if (!functions_.count(f)) throw Error(ErrorKind::UnknownIdentifier, "unknown function " + f);
    control_.value = nullptr;
    apply(Value::partial(f), args);
    return loop();
  }

private:
  struct Control {
    TermPtr term;  // evaluate this ...
    EnvPtr env;
    ValuePtr value;  // ... or return this
  };
  struct Frame {
    // Collecting the head and arguments of a spine, left to right.
    std::vector<TermPtr> items;
    size_t next = 0;
    std::vector<ValuePtr> values;
    EnvPtr env;
    // Applying a returned function value to leftover arguments.
    bool over = false;
    std::vector<ValuePtr> rest;
  };

  size_t arity(const std::string& name) const {
    if (auto it = functions_.find(name); it != functions_.end()) return it->second->arity();
    return p_.constructor_arity(name);
  }

  void give(ValuePtr v) {
    control_.term = nullptr;
    control_.value = std::move(v);
  }

  void apply(const ValuePtr& f, const std::vector<ValuePtr>& args) {
    if (f->kind == Value::Kind::Data) {
      if (args.empty()) return give(f);
      throw Error(ErrorKind::StuckTerm, "data value " + to_string(*f) + " applied to arguments");
    }
    std::vector<ValuePtr> all = f->args;
    all.insert(all.end(), args.begin(), args.end());
    auto fn = functions_.find(f->name);
    size_t k = arity(f->name);
    if (fn == functions_.end()) {
      if (all.size() < k) return give(Value::partial(f->name, std::move(all)));
      if (all.size() > k) throw Error(ErrorKind::StuckTerm, "constructor " + f->name + " over-applied");
      return give(Value::data(f->name, std::move(all)));
    }
    if (all.size() < k) return give(Value::partial(f->name, std::move(all)));
    std::vector<ValuePtr> now(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<ValuePtr> later(all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
    if (!later.empty()) {
      Frame frame;
      frame.over = true;
      frame.rest = std::move(later);
      stack_.push_back(std::move(frame));
    }
    fire(*fn->second, now);
  }

  void fire(const FunctionDef& f, const std::vector<ValuePtr>& args) {
    for (const auto& eq : f.equations) {
      Env env;
      bool ok = true;
      for (size_t i = 0; i < args.size() && ok; ++i) ok = match(eq.lhs[i], args[i], env);
      if (!ok) continue;
      if (firings_ == fuel_) {
        exhausted_ = true;
        return;
      }
      ++firings_;
      if (!f.costFree) ++steps_;
      control_ = Control{eq.rhs, std::make_shared<const Env>(std::move(env)), nullptr};
      return;
    }
    std::string shown = f.name;
    for (const auto& a : args) shown += " " + show(a.get(), true);
    throw Error(ErrorKind::StuckTerm, "no equation of " + f.name + " matches " + shown, f.loc);
  }

  void eval_atom(const TermPtr& t, const EnvPtr& env) {
    switch (t->kind) {
      case Term::Kind::Var: {
        auto it = env->find(t->name);
        if (it == env->end()) throw Error(ErrorKind::UnknownIdentifier, "unbound variable " + t->name, t->loc);
        return give(it->second);
      }
      case Term::Kind::Fun:
      case Term::Kind::Con: return apply(Value::partial(t->name), {});
      case Term::Kind::App: break;
    }
  }

  EvalResult loop() {
    while (true) {
      if (exhausted_) return EvalResult{nullptr, steps_, EvalStatus::FuelExhausted};
      if (control_.term) {
        TermPtr t = control_.term;
        EnvPtr env = control_.env;
        if (!t->is_app()) {
          eval_atom(t, env);
          continue;
        }
        Spine s = spine(t);
        Frame frame;
        frame.items.push_back(s.head);
        frame.items.insert(frame.items.end(), s.args.begin(), s.args.end());
        frame.next = 1;
        frame.env = env;
        stack_.push_back(std::move(frame));
        control_ = Control{s.head, env, nullptr};
        continue;
      }
      ValuePtr v = control_.value;
      if (stack_.empty()) return EvalResult{v, steps_, EvalStatus::Finished};
      Frame& top = stack_.back();
      if (top.over) {
        std::vector<ValuePtr> rest = std::move(top.rest);
        stack_.pop_back();
        apply(v, rest);
        continue;
      }
      top.values.push_back(v);
      if (top.next < top.items.size()) {
        control_ = Control{top.items[top.next++], top.env, nullptr};
        continue;
      }
      std::vector<ValuePtr> values = std::move(top.values);
      stack_.pop_back();
      ValuePtr head = values.front();
      values.erase(values.begin());
      apply(head, values);
    }
  }

  const Program& p_;
  std::uint64_t fuel_;
  std::unordered_map<std::string, const FunctionDef*> functions_;
  std::vector<Frame> stack_;
  Control control_;
  std::uint64_t steps_ = 0;
  std::uint64_t firings_ = 0;
  bool exhausted_ = false;
};

}  // namespace

EvalResult evaluate(const Program& p, const TermPtr& t, std::uint64_t fuel) {
  return Machine(p, fuel).run_term(t);
}

EvalResult call(const Program& p, const std::string& f, const std::vector<ValuePtr>& args, std::uint64_t fuel) {
  return Machine(p, fuel).run_call(f, args);
}

// ---- sizes ----

namespace {

struct ConstructorShape {
  std::string name;
  std::vector<SimpleType> args;
  std::vector<size_t> recursive;  // argument positions of the result type
};

std::vector<std::string> constructor_names(const Program& p, const SimpleType& t) {
  if (t.name == builtin::kNat) return {builtin::kZero, builtin::kSucc};
  if (t.name == builtin::kList) return {builtin::kNil, builtin::kCons};
  std::vector<std::string> out;
  for (const auto& d : p.datatypes)
    if (d.name == t.name)
      for (const auto& c : d.constructors) out.push_back(c.name);
  return out;
}

std::vector<ConstructorShape> shapes(const Program& p, const SimpleType& t) {
  std::vector<ConstructorShape> out;
  for (const auto& c : constructor_names(p, t)) {
    ConstructorShape s{c, constructor_arg_types(p, c, t), {}};
    for (size_t i = 0; i < s.args.size(); ++i)
      if (s.args[i] == t) s.recursive.push_back(i);
    out.push_back(std::move(s));
  }
  return out;
}

unsigned weight(const ConstructorShape& c, SizeMeasure m) {
  return c.args.empty() && m == SizeMeasure::Natural ? 0 : 1;
}

// Recursive argument positions of a constructor, found from its name alone.
std::vector<size_t> recursive_positions(const Program& p, const std::string& con) {
  if (con == builtin::kSucc) return {0};
  if (con == builtin::kCons) return {1};
  if (con == builtin::kZero || con == builtin::kNil) return {};
  const Constructor* c = p.user_constructor(con);
  if (!c) throw Error(ErrorKind::NotData, "no size for " + con);
  std::vector<size_t> out;
  for (size_t i = 0; i < c->argTypes.size(); ++i)
    if (c->argTypes[i].is_base() && c->argTypes[i].name == c->datatype) out.push_back(i);
  return out;
}

}  // namespace

std::uint64_t size(const Program& p, const ValuePtr& root, SizeMeasure measure) {
  std::uint64_t total = 0;
  std::vector<const Value*> todo{root.get()};
  while (!todo.empty()) {
    const Value* v = todo.back();
    todo.pop_back();
    if (v->kind != Value::Kind::Data || v->name == builtin::kPair)
      throw Error(ErrorKind::NotData, "no size for " + to_string(*v));
    total += v->args.empty() && measure == SizeMeasure::Natural ? 0 : 1;
    for (size_t i : recursive_positions(p, v->name)) todo.push_back(v->args[i].get());
  }
  return total;
}

// ---- input generation ----

namespace {

class Generator {
public:
  Generator(const Program& p, std::mt19937_64& rng, SizeMeasure m, unsigned elementBudget)
      : p_(p), rng_(rng), m_(m), elementBudget_(elementBudget) {}

  std::optional<ValuePtr> sized(const SimpleType& t, unsigned n) {
    if (!t.is_base()) return std::nullopt;
    if (!feasible(t, n)) return std::nullopt;
    auto cs = shapes(p_, t);
    std::vector<const ConstructorShape*> candidates;
    for (const auto& c : cs)
      if (fits(t, c, n)) candidates.push_back(&c);
    const ConstructorShape& c = *candidates[pick(candidates.size())];
    std::vector<unsigned> parts = split(t, n - weight(c, m_), c.recursive.size());
    std::vector<ValuePtr> args(c.args.size());
    size_t r = 0;
    for (size_t i = 0; i < c.args.size(); ++i) {
      if (r < c.recursive.size() && c.recursive[r] == i) {
        args[i] = *sized(t, parts[r++]);
      } else {
        auto e = element(c.args[i]);
        if (!e) return std::nullopt;
        args[i] = *e;
      }
    }
    return Value::data(c.name, std::move(args));
  }

  bool exists(const SimpleType& t, unsigned n) { return t.is_base() && feasible(t, n); }

  // A value of a type whose size does not matter.
  std::optional<ValuePtr> element(const SimpleType& t) {
    switch (t.kind) {
      case SimpleType::Kind::Atom: return Value::nat(static_cast<unsigned>(pick(elementBudget_ + 1)));
      case SimpleType::Kind::Product: {
        auto a = element(t.left());
        auto b = element(t.right());
        if (!a || !b) return std::nullopt;
        return Value::pair(*a, *b);
      }
      case SimpleType::Kind::Base: {
        std::vector<unsigned> sizes;
        for (unsigned n = 0; n <= elementBudget_; ++n)
          if (feasible(t, n)) sizes.push_back(n);
        if (sizes.empty()) return std::nullopt;
        return sized(t, sizes[pick(sizes.size())]);
      }
      default: return std::nullopt;
    }
  }

private:
  size_t pick(size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng_); }

  bool fits(const SimpleType& t, const ConstructorShape& c, unsigned n) {
    unsigned w = weight(c, m_);
    if (n < w) return false;
    if (c.recursive.empty()) return n == w;
    return splittable(t, n - w, c.recursive.size());
  }

  bool feasible(const SimpleType& t, unsigned n) {
    auto key = std::make_pair(to_string(t), n);
    if (auto it = feasible_.find(key); it != feasible_.end()) return it->second;
    feasible_[key] = false;  // guards against ill-founded recursion
    bool ok = false;
    for (const auto& c : shapes(p_, t)) ok = ok || fits(t, c, n);
    return feasible_[key] = ok;
  }

  bool splittable(const SimpleType& t, unsigned n, size_t parts) {
    if (parts == 0) return n == 0;
    if (parts == 1) return feasible(t, n);
    for (unsigned first = 0; first <= n; ++first)
      if (feasible(t, first) && splittable(t, n - first, parts - 1)) return true;
    return false;
  }

  std::vector<unsigned> split(const SimpleType& t, unsigned n, size_t parts) {
    std::vector<unsigned> out;
    for (size_t k = parts; k > 0; --k) {
      if (k == 1) {
        out.push_back(n);
        break;
      }
      std::vector<unsigned> options;
      for (unsigned first = 0; first <= n; ++first)
        if (feasible(t, first) && splittable(t, n - first, k - 1)) options.push_back(first);
      unsigned first = options[pick(options.size())];
      out.push_back(first);
      n -= first;
    }
    return out;
  }

  const Program& p_;
  std::mt19937_64& rng_;
  SizeMeasure m_;
  unsigned elementBudget_;
  std::map<std::pair<std::string, unsigned>, bool> feasible_;
};

}  // namespace

std::optional<ValuePtr> generate_value(const Program& p, const SimpleType& t, unsigned n, std::mt19937_64& rng,
                                       SizeMeasure measure, unsigned elementBudget) {
  return Generator(p, rng, measure, elementBudget).sized(t, n);
}

std::vector<InputTuple> generate_inputs(const Program& p, const std::vector<SimpleType>& argTypes, unsigned budget,
                                        std::uint64_t seed, SizeMeasure measure, unsigned samples) {
  std::mt19937_64 rng(seed);
  Generator gen(p, rng, measure, 5);
  std::vector<InputTuple> out;
  auto attempt = [&](const std::vector<unsigned>& sizes) {
    InputTuple in;
    in.sizes = sizes;
    for (size_t i = 0; i < argTypes.size(); ++i) {
      auto v = gen.sized(argTypes[i], sizes[i]);
      if (!v) return;
      in.args.push_back(*v);
    }
    out.push_back(std::move(in));
  };
  size_t k = argTypes.size();
  if (k <= 2) {
    std::vector<unsigned> sizes(k, 0);
    while (true) {
      attempt(sizes);
      size_t i = 0;
      while (i < k && sizes[i] == budget) sizes[i++] = 0;
      if (i == k) break;
      ++sizes[i];
    }
  } else {
    // Sample among the sizes at which each argument has values at all.
    std::vector<std::vector<unsigned>> possible(k);
    for (size_t i = 0; i < k; ++i) {
      for (unsigned n = 0; n <= budget; ++n)
        if (gen.exists(argTypes[i], n)) possible[i].push_back(n);
      if (possible[i].empty()) return out;
    }
    for (unsigned s = 0; s < samples; ++s) {
      std::vector<unsigned> sizes(k);
      for (size_t i = 0; i < k; ++i)
        sizes[i] = possible[i][std::uniform_int_distribution<size_t>(0, possible[i].size() - 1)(rng)];
      attempt(sizes);
    }
  }
  return out;
}

std::optional<std::pair<std::vector<SimpleType>, SimpleType>> first_order_signature(const FunctionDef& f) {
  if (!f.signature) return std::nullopt;
  auto [args, result] = f.signature->uncurry(static_cast<int>(f.arity()));
  if (args.size() != f.arity() || !result.is_base()) return std::nullopt;
  for (const auto& a : args)
    if (!a.is_base()) return std::nullopt;
  return std::make_pair(args, result);
}

BoundReport check_bound(const Program& p, const SizedType& type, const Interpretation& interp,
                        const std::string& entry, const std::vector<InputTuple>& inputs, std::uint64_t fuel,
                        SizeMeasure measure) {
  SizedType body = type;
  while (body.is_forall()) body = body.body();
  std::vector<IndexTerm> domains;
  while (body.is_arrow()) {
    SizedType d = body.dom();
    while (d.is_forall()) d = d.body();
    domains.push_back(d.is_base() ? d.index : IndexTerm::zero());
    body = body.cod();
    while (body.is_forall()) body = body.body();
  }
  if (!body.is_base()) throw Error(ErrorKind::Unsupported, entry + " does not return an indexed base type");
  BoundReport report;
  for (const auto& in : inputs) {
    BoundCheck c;
    c.input = in;
    Assignment alpha;
    for (size_t i = 0; i < in.args.size() && i < domains.size(); ++i)
      if (domains[i].kind == IndexTerm::Kind::Var) alpha.values[domains[i].name] = in.sizes[i];
    c.predicted = evaluate(body.index, interp, alpha);
    try {
      EvalResult r = call(p, entry, in.args, fuel);
      c.steps = r.steps;
      if (r.status == EvalStatus::Finished)
        c.observed = size(p, r.value, measure);
      else
        c.note = "fuel exhausted";
    } catch (const Error& e) {
      c.note = e.what();
    }
    if (!c.observed) ++report.inconclusive;
    if (c.violation()) ++report.violations;
    report.checks.push_back(std::move(c));
  }
  return report;
}

}  // namespace sizax
