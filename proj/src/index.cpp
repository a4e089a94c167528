#include "sizax/index.hpp"

#include <algorithm>
#include <tuple>

#include "sizax/error.hpp"

namespace sizax {

IndexTerm IndexTerm::var(std::string name) { return IndexTerm{Kind::Var, std::move(name), {}}; }
IndexTerm IndexTerm::zero() { return IndexTerm{Kind::Zero, "", {}}; }
IndexTerm IndexTerm::succ(IndexTerm t) { return IndexTerm{Kind::Succ, "", {std::move(t)}}; }
IndexTerm IndexTerm::plus(IndexTerm a, IndexTerm b) { return IndexTerm{Kind::Plus, "", {std::move(a), std::move(b)}}; }
IndexTerm IndexTerm::mul(IndexTerm a, IndexTerm b) { return IndexTerm{Kind::Mul, "", {std::move(a), std::move(b)}}; }
IndexTerm IndexTerm::sym(std::string name, std::vector<IndexTerm> args) {
  return IndexTerm{Kind::Sym, std::move(name), std::move(args)};
}
IndexTerm IndexTerm::numeral(unsigned n, IndexTerm base) {
  for (unsigned i = 0; i < n; ++i) base = succ(std::move(base));
  return base;
}

void IndexTerm::collect_vars(std::set<std::string>& out) const {
  if (kind == Kind::Var) out.insert(name);
  for (const auto& a : args) a.collect_vars(out);
}

std::set<std::string> IndexTerm::vars() const {
  std::set<std::string> out;
  collect_vars(out);
  return out;
}

void IndexTerm::collect_symbols(std::map<std::string, size_t>& arities) const {
  if (kind == Kind::Sym) arities[name] = args.size();
  for (const auto& a : args) a.collect_symbols(arities);
}

bool IndexTerm::mentions_symbol() const {
  if (kind == Kind::Sym) return true;
  return std::any_of(args.begin(), args.end(), [](const IndexTerm& a) { return a.mentions_symbol(); });
}

bool IndexTerm::contains_var(const std::string& v) const {
  if (kind == Kind::Var) return name == v;
  return std::any_of(args.begin(), args.end(), [&](const IndexTerm& a) { return a.contains_var(v); });
}

bool IndexTerm::operator==(const IndexTerm& o) const {
  return kind == o.kind && name == o.name && args == o.args;
}

bool IndexTerm::operator<(const IndexTerm& o) const {
  return std::tie(kind, name, args) < std::tie(o.kind, o.name, o.args);
}

namespace {

// 0: sum, 1: product, 2: atomic
std::string render(const IndexTerm& t, int prec) {
  using K = IndexTerm::Kind;
  switch (t.kind) {
    case K::Var: return t.name;
    case K::Zero: return "0";
    case K::Succ: {
      unsigned n = 0;
      const IndexTerm* base = &t;
      while (base->kind == K::Succ) {
        ++n;
        base = &base->args[0];
      }
      if (base->kind == K::Zero) return std::to_string(n);
      std::string s = render(*base, 0) + "+" + std::to_string(n);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case K::Plus: {
      std::string s = render(t.args[0], 0) + "+" + render(t.args[1], 1);
      return prec > 0 ? "(" + s + ")" : s;
    }
    case K::Mul: {
      std::string s = render(t.args[0], 1) + "*" + render(t.args[1], 2);
      return prec > 1 ? "(" + s + ")" : s;
    }
    case K::Sym: {
      std::string s = t.name + "(";
      for (size_t i = 0; i < t.args.size(); ++i) s += (i ? "," : "") + render(t.args[i], 0);
      return s + ")";
    }
  }
  return "?";
}

}  // namespace

std::string to_string(const IndexTerm& t) { return render(t, 0); }

IndexTerm substitute(const IndexTerm& t, const IndexSubstitution& theta) {
  if (t.kind == IndexTerm::Kind::Var) {
    auto it = theta.find(t.name);
    return it == theta.end() ? t : it->second;
  }
  IndexTerm r = t;
  for (auto& a : r.args) a = substitute(a, theta);
  return r;
}

std::string formal_argument(size_t i) { return "x" + std::to_string(i + 1); }

void Interpretation::set(const std::string& symbol, size_t arity, Polynomial poly) {
  table_[symbol] = SymbolInterpretation{arity, std::move(poly)};
}

const SymbolInterpretation& Interpretation::at(const std::string& symbol) const {
  auto it = table_.find(symbol);
  if (it == table_.end()) throw Error(ErrorKind::UnboundSymbol, "no interpretation for index symbol " + symbol);
  return it->second;
}

void Interpretation::merge(const Interpretation& other) {
  for (const auto& [k, v] : other.table_) table_[k] = v;
}

std::string Interpretation::str() const {
  std::string out;
  for (const auto& [name, si] : table_) {
    out += name + "(";
    for (size_t i = 0; i < si.arity; ++i) out += (i ? "," : "") + formal_argument(i);
    out += ") = " + to_string(si.poly) + "\n";
  }
  return out;
}

Polynomial to_polynomial(const IndexTerm& t, const Interpretation& interp) {
  using K = IndexTerm::Kind;
  switch (t.kind) {
    case K::Var: return Polynomial::variable(t.name);
    case K::Zero: return Polynomial{};
    case K::Succ: return to_polynomial(t.args[0], interp) + Polynomial(1);
    case K::Plus: return to_polynomial(t.args[0], interp) + to_polynomial(t.args[1], interp);
    case K::Mul: return to_polynomial(t.args[0], interp) * to_polynomial(t.args[1], interp);
    case K::Sym: {
      const auto& si = interp.at(t.name);
      if (si.arity != t.args.size())
        throw Error(ErrorKind::ArityMismatch, "index symbol " + t.name + " applied to " +
                                                  std::to_string(t.args.size()) + " arguments, expected " +
                                                  std::to_string(si.arity));
      std::map<std::string, Polynomial> subst;
      for (size_t i = 0; i < t.args.size(); ++i) subst[formal_argument(i)] = to_polynomial(t.args[i], interp);
      return si.poly.compose(subst);
    }
  }
  return {};
}

IndexTerm from_polynomial(const Polynomial& p) {
  std::optional<IndexTerm> acc;
  std::int64_t constant = 0;
  for (const auto& [m, c] : display_order(p)) {
    if (m.is_constant()) {
      constant = c;
      continue;
    }
    std::optional<IndexTerm> prod;
    if (c != 1) prod = IndexTerm::numeral(static_cast<unsigned>(c));
    for (const auto& [v, e] : m.factors())
      for (unsigned i = 0; i < e; ++i)
        prod = prod ? IndexTerm::mul(*prod, IndexTerm::var(v)) : IndexTerm::var(v);
    acc = acc ? IndexTerm::plus(*acc, *prod) : *prod;
  }
  if (!acc) return IndexTerm::numeral(static_cast<unsigned>(constant));
  return IndexTerm::numeral(static_cast<unsigned>(constant), *acc);
}

std::uint64_t evaluate(const IndexTerm& t, const Interpretation& interp, const Assignment& alpha) {
  using K = IndexTerm::Kind;
  switch (t.kind) {
    case K::Var: return alpha(t.name);
    case K::Zero: return 0;
    case K::Succ: return evaluate(t.args[0], interp, alpha) + 1;
    case K::Plus: return evaluate(t.args[0], interp, alpha) + evaluate(t.args[1], interp, alpha);
    case K::Mul: return evaluate(t.args[0], interp, alpha) * evaluate(t.args[1], interp, alpha);
    case K::Sym: {
      const auto& si = interp.at(t.name);
      std::vector<std::uint64_t> values;
      for (const auto& a : t.args) values.push_back(evaluate(a, interp, alpha));
      return si.poly.evaluate<std::uint64_t>([&](const std::string& formal) -> std::uint64_t {
        size_t idx = std::stoul(formal.substr(1)) - 1;
        return idx < values.size() ? values[idx] : 0;
      });
    }
  }
  return 0;
}

Verdict leq_semantic(const Interpretation& interp, const IndexTerm& lhs, const IndexTerm& rhs) {
  Polynomial diff = to_polynomial(rhs, interp) - to_polynomial(lhs, interp);
  return absolutely_positive(diff) ? Verdict::Yes : Verdict::Unknown;
}

std::optional<Refutation> refute(const Interpretation& interp, const IndexTerm& lhs, const IndexTerm& rhs,
                                 std::mt19937_64& rng, unsigned samples, unsigned range) {
  std::set<std::string> vs = lhs.vars();
  rhs.collect_vars(vs);
  std::vector<std::string> vars(vs.begin(), vs.end());

  auto check = [&](const Assignment& a) -> std::optional<Refutation> {
    std::uint64_t l = evaluate(lhs, interp, a), r = evaluate(rhs, interp, a);
    if (l > r) return Refutation{a, l, r};
    return std::nullopt;
  };

  // Small assignments exhaustively, in order of increasing maximum value.
  constexpr unsigned kSmall = 3;
  if (vars.size() <= 4) {
    for (unsigned bound = 0; bound <= kSmall; ++bound) {
      std::vector<unsigned> cur(vars.size(), 0);
      while (true) {
        if (std::any_of(cur.begin(), cur.end(), [&](unsigned x) { return x == bound; }) || vars.empty()) {
          Assignment a;
          for (size_t i = 0; i < vars.size(); ++i) a.values[vars[i]] = cur[i];
          if (auto r = check(a)) return r;
        }
        size_t k = 0;
        while (k < cur.size() && cur[k] == bound) cur[k++] = 0;
        if (k == cur.size()) break;
        ++cur[k];
      }
    }
  }
  std::uniform_int_distribution<unsigned> dist(0, range);
  for (unsigned s = 0; s < samples; ++s) {
    Assignment a;
    for (const auto& v : vars) a.values[v] = dist(rng);
    if (auto r = check(a)) return r;
  }
  return std::nullopt;
}

}  // namespace sizax
