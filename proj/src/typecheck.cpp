#include "sizax/typecheck.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <random>

namespace sizax {

const SizedType& Declarations::at(const std::string& f) const {
  auto it = functions.find(f);
  if (it == functions.end()) throw Error(ErrorKind::UnknownIdentifier, "no sized declaration for " + f);
  return it->second;
}

namespace {

// i, j, k, l, m, n, p, q, r, then primed variants.
class LocalNames {
public:
  std::string next() {
    static const char* letters = "ijklmnpqruvw";
    size_t round = count_ / 12, pos = count_ % 12;
    ++count_;
    return std::string(1, letters[pos]) + std::string(round, '\'');
  }

private:
  size_t count_ = 0;
};

SizedType sized_element(const SimpleType& t, LocalNames& names, std::vector<std::string>& vars) {
  switch (t.kind) {
    case SimpleType::Kind::Base: {
      std::string v = names.next();
      vars.push_back(v);
      return SizedType::base(t.name, IndexTerm::var(v), t.args);
    }
    case SimpleType::Kind::Atom: return SizedType::atom(t.name);
    case SimpleType::Kind::Product:
      return SizedType::product(sized_element(t.left(), names, vars), sized_element(t.right(), names, vars));
    default: throw Error(ErrorKind::Unsupported, "functional constructor argument " + to_string(t));
  }
}

}  // namespace

SizedType constructor_declaration(const Program& p, const std::string& con, const SimpleType& result,
                                  SizeMeasure measure) {
  LocalNames names;
  std::vector<std::string> vars;
  if (con == builtin::kPair) {
    if (!result.is_product()) throw Error(ErrorKind::TypeMismatch, "pair constructor at " + to_string(result));
    SizedType left = sized_element(result.left(), names, vars);
    SizedType right = sized_element(result.right(), names, vars);
    return SizedType::forall(vars, SizedType::arrow(left, SizedType::arrow(right, SizedType::product(left, right))));
  }
  if (!result.is_base()) throw Error(ErrorKind::TypeMismatch, "constructor " + con + " at " + to_string(result));
  std::vector<SimpleType> args = constructor_arg_types(p, con, result);
  std::vector<SizedType> domains;
  std::optional<IndexTerm> sum;
  for (const auto& a : args) {
    if (a == result) {
      std::string v = names.next();
      vars.push_back(v);
      domains.push_back(SizedType::base(a.name, IndexTerm::var(v), a.args));
      sum = sum ? IndexTerm::plus(*sum, IndexTerm::var(v)) : IndexTerm::var(v);
    } else {
      domains.push_back(sized_element(a, names, vars));
    }
  }
  unsigned weight = (args.empty() && measure == SizeMeasure::Natural) ? 0 : 1;
  IndexTerm size = IndexTerm::numeral(weight, sum ? *sum : IndexTerm::zero());
  SizedType type = SizedType::base(result.name, size, result.args);
  for (auto it = domains.rbegin(); it != domains.rend(); ++it) type = SizedType::arrow(*it, type);
  return SizedType::forall(vars, type);
}

namespace {

struct TemplateBuilder {
  SymbolSupply& supply;
  std::vector<UnknownSymbol>& symbols;
  std::string owner;
  LocalNames names;

  SizedType negative(const SimpleType& t, std::vector<std::string>& vars) {
    switch (t.kind) {
      case SimpleType::Kind::Base: {
        std::string v = names.next();
        vars.push_back(v);
        return SizedType::base(t.name, IndexTerm::var(v), t.args);
      }
      case SimpleType::Kind::Atom: return SizedType::atom(t.name);
      case SimpleType::Kind::Product: {
        SizedType l = negative(t.left(), vars);
        return SizedType::product(l, negative(t.right(), vars));
      }
      default:
        throw Error(ErrorKind::UnsupportedRank,
                    "functional argument of a functional argument in " + owner + " needs a sized annotation");
    }
  }

  SizedType positive(const SimpleType& t, const std::vector<std::string>& scope) {
    switch (t.kind) {
      case SimpleType::Kind::Base: {
        std::string f = supply.template_symbol();
        std::vector<IndexTerm> args;
        for (const auto& v : scope) args.push_back(IndexTerm::var(v));
        symbols.push_back({f, args.size(), owner});
        return SizedType::base(t.name, IndexTerm::sym(f, args), t.args);
      }
      case SimpleType::Kind::Atom: return SizedType::atom(t.name);
      case SimpleType::Kind::Product: {
        SizedType l = positive(t.left(), scope);
        return SizedType::product(l, positive(t.right(), scope));
      }
      default:
        throw Error(ErrorKind::UnsupportedRank, "functional value inside a data structure in " + owner);
    }
  }

  static bool has_base(const SimpleType& t) {
    if (t.is_base()) return true;
    if (t.is_product()) return has_base(t.left()) || has_base(t.right());
    return false;
  }

  SizedType build(const SimpleType& type) {
    auto [doms, result] = type.uncurry();
    std::vector<std::string> outer;
    std::vector<SizedType> sizedDoms;
    for (const auto& d : doms) {
      if (!d.is_arrow()) {
        sizedDoms.push_back(negative(d, outer));
        continue;
      }
      auto [innerDoms, innerResult] = d.uncurry();
      std::vector<std::string> inner;
      std::vector<SizedType> sizedInner;
      for (const auto& id : innerDoms) sizedInner.push_back(negative(id, inner));
      // The argument's own outer parameter, as j in foldr. It never occurs
      // negatively, so the declaration stays canonical; variables of earlier
      // base arguments would not.
      std::vector<std::string> scope = inner;
      if (has_base(innerResult)) {
        std::string param = names.next();
        outer.push_back(param);
        scope.push_back(param);
      }
      SizedType body = positive(innerResult, scope);
      for (auto it = sizedInner.rbegin(); it != sizedInner.rend(); ++it) body = SizedType::arrow(*it, body);
      sizedDoms.push_back(SizedType::forall(inner, body));
    }
    SizedType body = positive(result, outer);
    for (auto it = sizedDoms.rbegin(); it != sizedDoms.rend(); ++it) body = SizedType::arrow(*it, body);
    return SizedType::forall(outer, body);
  }
};

}  // namespace

SizedType generate_template(const SimpleType& type, SymbolSupply& supply, std::vector<UnknownSymbol>& symbols,
                            const std::string& owner) {
  TemplateBuilder b{supply, symbols, owner, {}};
  return b.build(type);
}

Declarations generate_templates(const Program& p, SizeMeasure measure) {
  if (!p.typed) throw Error(ErrorKind::Usage, "generate_templates needs a simply typed program");
  Declarations decls;
  decls.measure = measure;
  for (const auto& f : p.functions) {
    if (f.sized) {
      if (skeleton(*f.sized) != *f.signature)
        throw Error(ErrorKind::SkeletonMismatch,
                    "sized declaration of " + f.name + " has shape " + to_string(skeleton(*f.sized)) +
                        " but the function has type " + to_string(*f.signature),
                    f.loc);
      decls.functions[f.name] = *f.sized;
      continue;
    }
    decls.functions[f.name] = generate_template(*f.signature, decls.supply, decls.symbols, f.name);
    decls.templated.insert(f.name);
  }
  return decls;
}

// ---- footprint ----

namespace {

IndexTerm substitute_fully(IndexTerm t, const IndexSubstitution& theta) {
  for (size_t round = 0; round <= theta.size(); ++round) {
    IndexTerm next = substitute(t, theta);
    if (next == t) return t;
    t = std::move(next);
  }
  return t;
}

void ordered_vars(const SizedType& t, std::vector<std::string>& out) {
  std::set<std::string> free = fv(t);
  // Walk the type to get a stable left-to-right order.
  std::function<void(const SizedType&)> walk = [&](const SizedType& s) {
    if (s.is_base()) {
      std::function<void(const IndexTerm&)> iw = [&](const IndexTerm& i) {
        if (i.kind == IndexTerm::Kind::Var && free.count(i.name) &&
            std::find(out.begin(), out.end(), i.name) == out.end())
          out.push_back(i.name);
        for (const auto& a : i.args) iw(a);
      };
      iw(s.index);
    }
    for (const auto& c : s.children) walk(c);
  };
  walk(t);
}

struct FootprintBuilder {
  const Program& p;
  const Declarations& decls;
  NameSupply& names;
  IndexSubstitution theta;
  Context ctx;
  std::vector<std::string> order;

  void match(const Pattern& pat, const SizedType& expected) {
    if (pat.kind == Pattern::Kind::Var) {
      ctx[pat.name] = expected;
      order.push_back(pat.name);
      return;
    }
    if (pat.name == builtin::kPair) {
      if (!expected.is_product())
        throw Error(ErrorKind::PatternNotBase, "pair pattern against " + to_string(expected), pat.loc);
      match(pat.args[0], expected.children[0]);
      match(pat.args[1], expected.children[1]);
      return;
    }
    if (!expected.is_base())
      throw Error(ErrorKind::PatternNotBase,
                  "constructor pattern " + print_pattern(pat) + " against " + to_string(expected), pat.loc);
    IndexTerm idx = substitute_fully(expected.index, theta);
    if (!idx.is_var() || theta.count(idx.name))
      throw Error(ErrorKind::NonCanonicalDeclaration,
                  "pattern " + print_pattern(pat) + " meets index " + to_string(idx) +
                      ", which is not a distinct variable",
                  pat.loc);
    SizedType decl = constructor_declaration(p, pat.name, pat.type, decls.measure);
    SizedType type = open_forall(decl, names);
    std::vector<SizedType> domains;
    for (size_t i = 0; i < pat.args.size(); ++i) {
      domains.push_back(type.dom());
      type = type.cod();
    }
    theta[idx.name] = type.index;
    for (size_t i = 0; i < pat.args.size(); ++i) match(pat.args[i], domains[i]);
  }
};

}  // namespace

Footprint footprint(const Program& p, const Declarations& decls, const Equation& eq, NameSupply& names) {
  const SizedType& decl = decls.at(eq.fun);
  std::set<std::string> declNames;
  collect_all_names(decl, declNames);
  names.reserve(declNames);

  FootprintBuilder b{p, decls, names, {}, {}, {}};
  SizedType type = decl.unquantified();
  for (const auto& pat : eq.lhs) {
    while (type.is_forall()) type = type.body();
    if (!type.is_arrow())
      throw Error(ErrorKind::ArityMismatch, eq.fun + " is declared with fewer arguments than its equations take",
                  eq.loc);
    b.match(pat, type.dom());
    type = type.cod();
  }
  auto apply = [&](const IndexTerm& i) { return substitute_fully(i, b.theta); };
  Footprint fp;
  fp.type = map_indices(type, apply);
  for (const auto& x : b.order) {
    fp.context[x] = map_indices(b.ctx[x], apply);
    ordered_vars(fp.context[x], fp.variables);
  }
  ordered_vars(fp.type, fp.variables);
  return fp;
}

// ---- checking ----

Checker::Checker(const Program& p, Declarations& decls) : p_(p), decls_(decls) {
  for (const auto& [_, t] : decls.functions) collect_all_names(t, reserved_);
}

SizedType Checker::infer_spine(const TermPtr& t, const Context& ctx, Instantiation& inst, int level,
                               const std::string& owner) {
  Spine s = spine(t);
  size_t from = inst.mark();
  SizedType cur;
  const Term& head = *s.head;
  switch (head.kind) {
    case Term::Kind::Var: {
      auto it = ctx.find(head.name);
      if (it == ctx.end()) throw Error(ErrorKind::UnknownIdentifier, "variable " + head.name + " not in context", head.loc);
      cur = it->second;
      break;
    }
    case Term::Kind::Fun: cur = decls_.at(head.name); break;
    case Term::Kind::Con: {
      size_t arity = p_.constructor_arity(head.name);
      SimpleType result = head.type.uncurry(static_cast<int>(arity)).second;
      cur = constructor_declaration(p_, head.name, result, decls_.measure);
      break;
    }
    case Term::Kind::App: break;
  }
  for (const auto& arg : s.args) {
    cur = inst.open_flexible(cur, level);
    if (!cur.is_arrow())
      throw Error(ErrorKind::SkeletonMismatch, head.name + " is applied to too many arguments", arg->loc);
    SizedType argType = infer_spine(arg, ctx, inst, level, owner);
    inst.subtype(argType, cur.dom(), level, Origin{arg->loc, owner, "argument of " + head.name});
    cur = cur.cod();
  }
  cur = inst.open_flexible(cur, level);
  return inst.close_spine(cur, from, level);
}

void Checker::collect(Instantiation& inst, ConstraintSet& out, const std::string& owner) {
  for (const auto& f : inst.fallbacks()) {
    decls_.symbols.push_back({f.name, f.arity, owner});
    out.declare_symbol(f.name, f.arity, owner);
  }
  for (auto& c : inst.constraints()) out.add(c);
  warnings_.insert(warnings_.end(), inst.warnings().begin(), inst.warnings().end());
}

ConstraintSet Checker::check_equation(const FunctionDef& f, const Equation& eq) {
  NameSupply names;
  names.reserve(reserved_);
  Instantiation inst(names, [this] { return decls_.supply.fallback_symbol(); });
  Footprint fp = footprint(p_, decls_, eq, names);
  for (const auto& v : fp.variables) inst.register_rigid(v, 0);
  SizedType rhs = infer_spine(eq.rhs, fp.context, inst, 0, f.name);
  inst.subtype(rhs, fp.type, 0, Origin{eq.loc, f.name, "equation"});
  inst.close_scope(0, 0);
  ConstraintSet out;
  collect(inst, out, f.name);
  return out;
}

SizedType Checker::infer(const TermPtr& t, const Context& ctx, ConstraintSet& out, const std::string& owner) {
  NameSupply names;
  names.reserve(reserved_);
  for (const auto& [_, type] : ctx) {
    std::set<std::string> all;
    collect_all_names(type, all);
    names.reserve(all);
  }
  Instantiation inst(names, [this] { return decls_.supply.fallback_symbol(); });
  for (const auto& [_, type] : ctx)
    for (const auto& v : fv(type)) inst.register_rigid(v, 0);
  SizedType result = infer_spine(t, ctx, inst, 0, owner);
  inst.close_scope(0, 0);
  collect(inst, out, owner);
  return inst.resolve(result);
}

CheckResult Checker::check_program() {
  CheckResult r;
  for (const auto& s : decls_.symbols) r.constraints.declare_symbol(s.name, s.arity, s.owner);
  for (const auto& f : p_.functions) {
    if (decls_.templated.count(f.name)) continue;
    const SizedType& d = decls_.at(f.name);
    if (auto canon = is_canonical(d); !canon)
      r.diagnostics.push_back({ErrorKind::NonCanonicalDeclaration, f.name + ": " + canon.diagnostic, f.loc});
    if (auto free = fv(d); !free.empty())
      r.diagnostics.push_back(
          {ErrorKind::NonCanonicalDeclaration, f.name + ": declaration is not closed (" + *free.begin() + ")", f.loc});
  }

  std::mt19937_64 rng(0x5eed);
  auto sccs = call_graph_sccs(p_);
  for (size_t k = 0; k < sccs.size(); ++k) {
    for (const auto& name : sccs[k]) {
      const FunctionDef& f = *p_.find(name);
      for (const auto& eq : f.equations) {
        ConstraintSet cs;
        try {
          cs = check_equation(f, eq);
        } catch (const Error& e) {
          r.diagnostics.push_back({e.kind(), f.name + ": " + e.what(), e.loc().valid() ? e.loc() : eq.loc});
          continue;
        }
        for (const auto& [sym, arity] : cs.arities())
          r.constraints.declare_symbol(sym, arity, cs.owners().count(sym) ? cs.owners().at(sym) : "");
        for (auto c : cs.constraints()) {
          c.scc = static_cast<int>(k);
          if (!c.lhs.mentions_symbol() && !c.rhs.mentions_symbol()) {
            Interpretation none;
            if (leq_semantic(none, c.lhs, c.rhs) == Verdict::Yes) continue;
            if (auto cex = refute(none, c.lhs, c.rhs, rng)) {
              r.diagnostics.push_back({ErrorKind::SubtypeFailure,
                                       f.name + ": " + c.str() + " fails (" + std::to_string(cex->lhsValue) +
                                           " > " + std::to_string(cex->rhsValue) + ")",
                                       c.origin.loc});
              continue;
            }
          }
          r.constraints.add(c);
        }
      }
    }
  }
  r.warnings = std::move(warnings_);
  warnings_.clear();
  return r;
}

CheckResult check_program(const Program& p, Declarations& decls) { return Checker(p, decls).check_program(); }

}  // namespace sizax
