#include "sizax/sized_type.hpp"

#include <algorithm>
#include <cctype>

#include "sizax/error.hpp"

namespace sizax {

SizedType SizedType::base(std::string name, IndexTerm index, std::vector<SimpleType> typeArgs) {
  SizedType t;
  t.kind = Kind::Base;
  t.name = std::move(name);
  t.index = std::move(index);
  t.typeArgs = std::move(typeArgs);
  return t;
}

SizedType SizedType::atom(std::string name) {
  SizedType t;
  t.kind = Kind::Atom;
  t.name = std::move(name);
  return t;
}

SizedType SizedType::product(SizedType left, SizedType right) {
  SizedType t;
  t.kind = Kind::Product;
  t.children = {std::move(left), std::move(right)};
  return t;
}

SizedType SizedType::arrow(SizedType dom, SizedType cod) {
  SizedType t;
  t.kind = Kind::Arrow;
  t.children = {std::move(dom), std::move(cod)};
  return t;
}

SizedType SizedType::forall(std::vector<std::string> vars, SizedType body) {
  if (vars.empty()) return body;
  if (body.is_forall()) {
    // Merge nested prefixes: forall i. forall j. t == forall i j. t
    vars.insert(vars.end(), body.bound.begin(), body.bound.end());
    SizedType inner = body.body();
    return forall(std::move(vars), std::move(inner));
  }
  SizedType t;
  t.kind = Kind::Forall;
  t.bound = std::move(vars);
  t.children = {std::move(body)};
  return t;
}

bool SizedType::operator==(const SizedType& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Base: return name == o.name && typeArgs == o.typeArgs && index == o.index;
    case Kind::Atom: return name == o.name;
    case Kind::Forall: return bound == o.bound && children == o.children;
    default: return children == o.children;
  }
}

namespace {

std::string display_base_name(const std::string& name) { return name == builtin::kList ? "L" : name; }

std::string render_index_atom(const IndexTerm& t) {
  std::string s = to_string(t);
  bool atomic = t.kind == IndexTerm::Kind::Var || t.kind == IndexTerm::Kind::Sym ||
                std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  return atomic ? s : "(" + s + ")";
}

// 0: top, 1: left of arrow / argument
std::string render(const SizedType& t, int prec) {
  using K = SizedType::Kind;
  switch (t.kind) {
    case K::Atom: return t.name;
    case K::Base: {
      std::string s = display_base_name(t.name) + " " + render_index_atom(t.index);
      for (const auto& a : t.typeArgs) {
        std::string as = to_string(a);
        bool atomic = a.kind == SimpleType::Kind::Atom || a.kind == SimpleType::Kind::Product ||
                      (a.kind == SimpleType::Kind::Base && a.args.empty());
        s += " " + (atomic ? as : "(" + as + ")");
      }
      return prec > 1 ? "(" + s + ")" : s;
    }
    case K::Product: return "(" + render(t.children[0], 0) + ", " + render(t.children[1], 0) + ")";
    case K::Arrow: {
      std::string s = render(t.dom(), 1) + " -> " + render(t.cod(), 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case K::Forall: {
      std::string s = "forall";
      for (const auto& v : t.bound) s += " " + v;
      s += ". " + render(t.body(), 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
  }
  return "?";
}

void collect_free(const SizedType& t, bool positive, FreeVars& out, const std::set<std::string>& boundVars) {
  using K = SizedType::Kind;
  switch (t.kind) {
    case K::Atom: return;
    case K::Base:
      for (const auto& v : t.index.vars())
        if (!boundVars.count(v)) (positive ? out.positive : out.negative).insert(v);
      return;
    case K::Product:
      collect_free(t.children[0], positive, out, boundVars);
      collect_free(t.children[1], positive, out, boundVars);
      return;
    case K::Arrow:
      collect_free(t.dom(), !positive, out, boundVars);
      collect_free(t.cod(), positive, out, boundVars);
      return;
    case K::Forall: {
      std::set<std::string> inner = boundVars;
      inner.insert(t.bound.begin(), t.bound.end());
      collect_free(t.body(), positive, out, inner);
      return;
    }
  }
}

}  // namespace

std::string to_string(const SizedType& t) { return render(t, 0); }

SimpleType skeleton(const SizedType& t) {
  using K = SizedType::Kind;
  switch (t.kind) {
    case K::Atom: return SimpleType::atom(t.name);
    case K::Base: return SimpleType::base(t.name, t.typeArgs);
    case K::Product: return SimpleType::product(skeleton(t.children[0]), skeleton(t.children[1]));
    case K::Arrow: return SimpleType::arrow(skeleton(t.dom()), skeleton(t.cod()));
    case K::Forall: return skeleton(t.body());
  }
  return {};
}

std::set<std::string> FreeVars::all() const {
  std::set<std::string> r = positive;
  r.insert(negative.begin(), negative.end());
  return r;
}

FreeVars free_vars(const SizedType& t) {
  FreeVars out;
  collect_free(t, true, out, {});
  return out;
}

std::set<std::string> fv(const SizedType& t) { return free_vars(t).all(); }
std::set<std::string> fnv(const SizedType& t) { return free_vars(t).negative; }

std::string NameSupply::fresh(const std::string& stem) {
  std::string base = stem.substr(0, stem.find('\''));
  if (base.empty()) base = "i";
  if (used_.insert(base).second) return base;
  for (int n = 1;; ++n) {
    std::string candidate = n <= 2 ? base + std::string(n, '\'') : base + "'" + std::to_string(n);
    if (used_.insert(candidate).second) return candidate;
  }
}

void collect_all_names(const SizedType& t, std::set<std::string>& out) {
  if (t.is_base()) t.index.collect_vars(out);
  out.insert(t.bound.begin(), t.bound.end());
  for (const auto& c : t.children) collect_all_names(c, out);
}

SizedType substitute(const SizedType& t, const IndexSubstitution& theta, NameSupply& names) {
  using K = SizedType::Kind;
  switch (t.kind) {
    case K::Atom: return t;
    case K::Base: return SizedType::base(t.name, substitute(t.index, theta), t.typeArgs);
    case K::Product:
    case K::Arrow: {
      SizedType r = t;
      for (auto& c : r.children) c = substitute(c, theta, names);
      return r;
    }
    case K::Forall: {
      IndexSubstitution inner = theta;
      for (const auto& v : t.bound) inner.erase(v);
      std::set<std::string> rangeVars;
      for (const auto& [k, term] : inner) term.collect_vars(rangeVars);
      std::vector<std::string> bound = t.bound;
      for (auto& v : bound) {
        if (rangeVars.count(v)) {
          std::set<std::string> avoid = rangeVars;
          collect_all_names(t, avoid);
          names.reserve(avoid);
          std::string fresh = names.fresh(v);
          inner[v] = IndexTerm::var(fresh);
          v = fresh;
        }
      }
      SizedType body = substitute(t.body(), inner, names);
      return SizedType::forall(std::move(bound), std::move(body));
    }
  }
  return t;
}

SizedType substitute(const SizedType& t, const IndexSubstitution& theta) {
  NameSupply names;
  return substitute(t, theta, names);
}

SizedType open_forall(const SizedType& t, NameSupply& names, std::vector<std::string>* renamed) {
  if (!t.is_forall()) return t;
  IndexSubstitution theta;
  for (const auto& v : t.bound) {
    std::string fresh = names.fresh(v);
    theta[v] = IndexTerm::var(fresh);
    if (renamed) renamed->push_back(fresh);
  }
  return substitute(t.body(), theta, names);
}

SizedType instantiate(const SizedType& t, const std::vector<IndexTerm>& args) {
  if (!t.is_forall()) {
    if (!args.empty())
      throw Error(ErrorKind::ArityMismatch, "cannot instantiate monotype " + to_string(t) + " with arguments");
    return t;
  }
  if (args.size() != t.bound.size())
    throw Error(ErrorKind::ArityMismatch, "instantiation of " + to_string(t) + " expects " +
                                              std::to_string(t.bound.size()) + " index terms, got " +
                                              std::to_string(args.size()));
  IndexSubstitution theta;
  for (size_t i = 0; i < args.size(); ++i) theta[t.bound[i]] = args[i];
  NameSupply names;
  std::set<std::string> avoid;
  collect_all_names(t, avoid);
  for (const auto& a : args) a.collect_vars(avoid);
  names.reserve(avoid);
  return substitute(t.body(), theta, names);
}

namespace {

CanonicityResult fail(std::string msg) { return CanonicityResult{false, std::move(msg)}; }

CanonicityResult canonical_mono(const SizedType& t);
CanonicityResult canonical_poly(const SizedType& t);

void product_leaves(const SizedType& t, std::vector<const SizedType*>& out) {
  if (t.is_product()) {
    product_leaves(t.children[0], out);
    product_leaves(t.children[1], out);
  } else {
    out.push_back(&t);
  }
}

CanonicityResult canonical_domain(const SizedType& dom, const SizedType& cod) {
  std::set<std::string> codNeg = fnv(cod);
  std::vector<const SizedType*> leaves;
  product_leaves(dom, leaves);
  std::set<std::string> seen;
  for (const SizedType* leaf : leaves) {
    if (leaf->kind == SizedType::Kind::Atom) continue;
    if (leaf->is_base()) {
      if (!leaf->index.is_var())
        return fail("non-variable index " + to_string(leaf->index) + " directly left of an arrow in " +
                    to_string(SizedType::arrow(dom, cod)));
      const std::string& v = leaf->index.name;
      if (codNeg.count(v) || !seen.insert(v).second)
        return fail("index variable " + v + " occurs more than once in negative position; variables left of "
                    "arrows must be pairwise distinct");
      continue;
    }
    // functional argument: a canonical polytype not sharing variables with
    // negative positions of the remaining type
    if (auto r = canonical_poly(*leaf); !r) return r;
    for (const auto& v : fv(*leaf))
      if (codNeg.count(v))
        return fail("functional argument " + to_string(*leaf) + " shares index variable " + v +
                    " with a negative position of " + to_string(cod));
  }
  return {};
}

CanonicityResult canonical_mono(const SizedType& t) {
  using K = SizedType::Kind;
  switch (t.kind) {
    case K::Atom:
    case K::Base: return {};
    case K::Product: {
      if (auto r = canonical_mono(t.children[0]); !r) return r;
      return canonical_mono(t.children[1]);
    }
    case K::Arrow: {
      if (auto r = canonical_domain(t.dom(), t.cod()); !r) return r;
      return canonical_mono(t.cod());
    }
    case K::Forall: return canonical_poly(t);
  }
  return {};
}

CanonicityResult canonical_poly(const SizedType& t) {
  const SizedType& body = t.unquantified();
  if (auto r = canonical_mono(body); !r) return r;
  std::set<std::string> boundVars(t.bound.begin(), t.bound.end());
  for (const auto& v : fnv(body))
    if (!boundVars.count(v))
      return fail("negative index variable " + v + " of " + to_string(t) + " is not quantified");
  return {};
}

void canonical_names(SizedType& t, std::map<std::string, std::string> env, int& counter) {
  if (t.is_forall()) {
    for (auto& v : t.bound) {
      std::string c = "%" + std::to_string(counter++);
      env[v] = c;
      v = c;
    }
  }
  if (t.is_base()) {
    IndexSubstitution theta;
    for (const auto& [from, to] : env) theta[from] = IndexTerm::var(to);
    t.index = substitute(t.index, theta);
  }
  for (auto& c : t.children) canonical_names(c, env, counter);
}

}  // namespace

CanonicityResult is_canonical(const SizedType& t) {
  if (t.is_forall()) return canonical_poly(t);
  return canonical_mono(t);
}

bool alpha_equivalent(const SizedType& a, const SizedType& b) {
  SizedType ca = a, cb = b;
  int n1 = 0, n2 = 0;
  canonical_names(ca, {}, n1);
  canonical_names(cb, {}, n2);
  return ca == cb;
}

SizedType map_indices(const SizedType& t, const std::function<IndexTerm(const IndexTerm&)>& f) {
  SizedType r = t;
  if (r.is_base()) r.index = f(r.index);
  for (auto& c : r.children) c = map_indices(c, f);
  return r;
}

}  // namespace sizax
