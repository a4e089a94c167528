#include "sizax/subtyping.hpp"

#include <algorithm>

namespace sizax {

Instantiation::Instantiation(NameSupply& names, std::function<std::string()> freshSymbol)
    : names_(names), freshSymbol_(std::move(freshSymbol)) {}

std::string Instantiation::rigid(const std::string& stem, int level) {
  std::string name = names_.fresh(stem);
  register_rigid(name, level);
  return name;
}

void Instantiation::register_rigid(const std::string& name, int level) {
  names_.reserve(name);
  if (vars_.count(name)) return;
  Var v;
  v.level = level;
  vars_[name] = v;
  order_.push_back(name);
}

std::string Instantiation::flexible(const std::string& stem, int level) {
  std::string name = names_.fresh(stem);
  Var v;
  v.flexible = true;
  v.level = level;
  vars_[name] = v;
  order_.push_back(name);
  return name;
}

Instantiation::Var* Instantiation::lookup(const std::string& name) {
  auto it = vars_.find(name);
  return it == vars_.end() ? nullptr : &it->second;
}

const Instantiation::Var* Instantiation::lookup(const std::string& name) const {
  auto it = vars_.find(name);
  return it == vars_.end() ? nullptr : &it->second;
}

IndexTerm Instantiation::resolve(const IndexTerm& t) const {
  if (t.kind == IndexTerm::Kind::Var) {
    const Var* v = lookup(t.name);
    return v && v->hasBinding ? resolve(v->binding) : t;
  }
  IndexTerm r = t;
  for (auto& a : r.args) a = resolve(a);
  return r;
}

SizedType Instantiation::resolve(const SizedType& t) const {
  return map_indices(t, [this](const IndexTerm& i) { return resolve(i); });
}

SizedType Instantiation::open_flexible(const SizedType& t, int level, std::vector<std::string>* opened) {
  if (!t.is_forall()) return t;
  IndexSubstitution theta;
  for (const auto& b : t.bound) {
    std::string v = flexible(b, level);
    theta[b] = IndexTerm::var(v);
    if (opened) opened->push_back(v);
  }
  return substitute(t.body(), theta, names_);
}

SizedType Instantiation::open_rigid(const SizedType& t, int level) {
  if (!t.is_forall()) return t;
  IndexSubstitution theta;
  for (const auto& b : t.bound) theta[b] = IndexTerm::var(rigid(b, level));
  return substitute(t.body(), theta, names_);
}

bool Instantiation::unbound_flexible(const IndexTerm& t) const {
  if (t.kind != IndexTerm::Kind::Var) return false;
  const Var* v = lookup(t.name);
  return v && v->flexible && !v->hasBinding;
}

bool Instantiation::try_bind(const std::string& name, const IndexTerm& t0) {
  IndexTerm t = resolve(t0);
  if (t.contains_var(name)) return false;
  Var& target = vars_.at(name);
  std::set<std::string> occurring = t.vars();
  for (const auto& w : occurring) {
    const Var* info = lookup(w);
    if (!info) continue;  // unregistered: rigid at level 0
    if (!info->flexible && (!info->active || info->level > target.level)) return false;
  }
  for (const auto& w : occurring)
    if (Var* info = lookup(w); info && info->flexible) info->level = std::min(info->level, target.level);
  target.hasBinding = true;
  target.binding = t;
  return true;
}

bool Instantiation::unify(const IndexTerm& a0, const IndexTerm& b0) {
  IndexTerm a = resolve(a0), b = resolve(b0);
  if (a == b) return true;
  if (unbound_flexible(a)) return try_bind(a.name, b);
  if (unbound_flexible(b)) return try_bind(b.name, a);
  if (a.kind != b.kind || a.kind == IndexTerm::Kind::Var || a.name != b.name || a.args.size() != b.args.size())
    return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!unify(a.args[i], b.args[i])) return false;
  return true;
}

void Instantiation::index_leq(const IndexTerm& a0, const IndexTerm& b0, const Origin& origin) {
  IndexTerm a = resolve(a0), b = resolve(b0);
  if (a == b) return;
  if (unbound_flexible(b) && try_bind(b.name, a)) return;
  if (unbound_flexible(a) && try_bind(a.name, b)) return;
  auto saved = vars_;
  if (unify(a, b)) return;
  vars_ = std::move(saved);
  for (const IndexTerm* side : {&a0, &b0})
    if (side->kind == IndexTerm::Kind::Var)
      if (const Var* v = lookup(side->name); v && v->flexible && v->hasBinding)
        warnings_.push_back({ErrorKind::AmbiguousInstantiation,
                             origin.function + ": " + side->name + " instantiated to " + to_string(v->binding) +
                                 " at its first occurrence; " + to_string(a) + " <= " + to_string(b) +
                                 " is left as a constraint",
                             origin.loc});
  deferred_.push_back(Constraint{a, b, origin, -1});
}

void Instantiation::subtype(const SizedType& sub, const SizedType& sup, int level, const Origin& origin) {
  if (sup.is_forall()) {
    size_t from = mark();
    SizedType body = open_rigid(sup, level + 1);
    subtype(sub, body, level + 1, origin);
    close_scope(from, level + 1);
    return;
  }
  if (sub.is_forall()) {
    subtype(open_flexible(sub, level), sup, level, origin);
    return;
  }
  auto mismatch = [&]() {
    throw Error(ErrorKind::SkeletonMismatch,
                "cannot compare " + to_string(resolve(sub)) + " with " + to_string(resolve(sup)), origin.loc);
  };
  if (sub.kind != sup.kind) mismatch();
  switch (sub.kind) {
    case SizedType::Kind::Atom:
      if (sub.name != sup.name) mismatch();
      return;
    case SizedType::Kind::Base:
      if (sub.name != sup.name || sub.typeArgs != sup.typeArgs) mismatch();
      index_leq(sub.index, sup.index, origin);
      return;
    case SizedType::Kind::Product:
      subtype(sub.children[0], sup.children[0], level, origin);
      subtype(sub.children[1], sup.children[1], level, origin);
      return;
    case SizedType::Kind::Arrow:
      subtype(sup.dom(), sub.dom(), level, origin);
      subtype(sub.cod(), sup.cod(), level, origin);
      return;
    case SizedType::Kind::Forall:
      return;
  }
}

bool Instantiation::mentioned_in_deferred(const std::string& v) const {
  return std::any_of(deferred_.begin(), deferred_.end(), [&](const Constraint& c) {
    return resolve(c.lhs).contains_var(v) || resolve(c.rhs).contains_var(v);
  });
}

void Instantiation::fallback(const std::string& name) {
  Var& target = vars_.at(name);
  std::vector<IndexTerm> args;
  for (const auto& r : order_) {
    const Var& info = vars_.at(r);
    if (!info.flexible && info.active && info.level <= target.level) args.push_back(IndexTerm::var(r));
  }
  std::string sym = freshSymbol_();
  fallbacks_.push_back({sym, args.size()});
  target.hasBinding = true;
  target.binding = IndexTerm::sym(sym, std::move(args));
}

void Instantiation::close_scope(size_t from, int level) {
  for (size_t i = from; i < order_.size(); ++i) {
    const std::string& name = order_[i];
    const Var& v = vars_.at(name);
    if (v.flexible && !v.hasBinding && v.level >= level && mentioned_in_deferred(name)) fallback(name);
  }
  for (size_t i = from; i < order_.size(); ++i) {
    Var& v = vars_.at(order_[i]);
    if (!v.flexible && v.level >= level) v.active = false;
  }
}

SizedType Instantiation::close_spine(const SizedType& result, size_t from, int level) {
  SizedType r = resolve(result);
  FreeVars fvs = free_vars(r);
  std::vector<std::string> generalized;
  for (size_t i = from; i < order_.size(); ++i) {
    const std::string name = order_[i];
    Var& v = vars_.at(name);
    if (!v.flexible || v.hasBinding || v.level < level) continue;
    if (fvs.negative.count(name)) {
      generalized.push_back(name);
      // Now a bound variable of the result; nothing may instantiate it.
      v.flexible = false;
      v.active = false;
    } else if (fvs.positive.count(name) || mentioned_in_deferred(name)) {
      fallback(name);
    }
  }
  return SizedType::forall(generalized, resolve(r));
}

std::vector<Constraint> Instantiation::constraints() const {
  std::vector<Constraint> out;
  for (const auto& c : deferred_) out.push_back(Constraint{resolve(c.lhs), resolve(c.rhs), c.origin, c.scc});
  return out;
}

ConstraintSet subtype_constraints(const SizedType& sub, const SizedType& sup) {
  NameSupply names;
  std::set<std::string> all;
  collect_all_names(sub, all);
  collect_all_names(sup, all);
  names.reserve(all);
  int counter = 0;
  Instantiation inst(names, [&counter] { return "J" + std::to_string(++counter); });
  for (const auto& v : fv(sub)) inst.register_rigid(v, 0);
  for (const auto& v : fv(sup)) inst.register_rigid(v, 0);
  Origin origin{{}, "", "subtype"};
  inst.subtype(sub, sup, 0, origin);
  inst.close_scope(0, 0);
  ConstraintSet cs;
  for (const auto& f : inst.fallbacks()) cs.declare_symbol(f.name, f.arity);
  for (auto& c : inst.constraints()) cs.add(c);
  return cs;
}

}  // namespace sizax
