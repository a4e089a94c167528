#include "sizax/simple_type.hpp"

#include <tuple>

namespace sizax {

SimpleType SimpleType::base(std::string name, std::vector<SimpleType> args) {
  return SimpleType{Kind::Base, std::move(name), std::move(args)};
}

SimpleType SimpleType::atom(std::string name) {
  return SimpleType{Kind::Atom, std::move(name), {}};
}

SimpleType SimpleType::product(SimpleType left, SimpleType right) {
  return SimpleType{Kind::Product, "", {std::move(left), std::move(right)}};
}

SimpleType SimpleType::arrow(SimpleType from, SimpleType to) {
  return SimpleType{Kind::Arrow, "", {std::move(from), std::move(to)}};
}

SimpleType SimpleType::meta(int id) {
  return SimpleType{Kind::Meta, "?" + std::to_string(id), {}};
}

SimpleType SimpleType::arrows(const std::vector<SimpleType>& domains, SimpleType result) {
  for (auto it = domains.rbegin(); it != domains.rend(); ++it) result = arrow(*it, std::move(result));
  return result;
}

std::pair<std::vector<SimpleType>, SimpleType> SimpleType::uncurry(int count) const {
  std::vector<SimpleType> domains;
  const SimpleType* cur = this;
  while (cur->is_arrow() && (count < 0 || static_cast<int>(domains.size()) < count)) {
    domains.push_back(cur->left());
    cur = &cur->right();
  }
  return {domains, *cur};
}

int SimpleType::arrow_count() const {
  int n = 0;
  for (const SimpleType* cur = this; cur->is_arrow(); cur = &cur->right()) ++n;
  return n;
}

bool SimpleType::first_order() const {
  if (kind == Kind::Arrow) return false;
  for (const auto& a : args)
    if (!a.first_order()) return false;
  return true;
}

bool SimpleType::operator==(const SimpleType& other) const {
  return kind == other.kind && name == other.name && args == other.args;
}

bool SimpleType::operator<(const SimpleType& other) const {
  return std::tie(kind, name, args) < std::tie(other.kind, other.name, other.args);
}

static std::string render(const SimpleType& t, int prec) {
  using K = SimpleType::Kind;
  switch (t.kind) {
    case K::Atom:
    case K::Meta:
      return t.name;
    case K::Base: {
      if (t.args.empty()) return t.name;
      std::string s = t.name;
      for (const auto& a : t.args) s += " " + render(a, 2);
      return prec >= 2 ? "(" + s + ")" : s;
    }
    case K::Product:
      return "(" + render(t.left(), 0) + ", " + render(t.right(), 0) + ")";
    case K::Arrow: {
      std::string s = render(t.left(), 1) + " -> " + render(t.right(), 0);
      return prec >= 1 ? "(" + s + ")" : s;
    }
  }
  return "?";
}

std::string to_string(const SimpleType& type) { return render(type, 0); }

namespace builtin {
SimpleType nat() { return SimpleType::base(kNat); }
SimpleType list(SimpleType element) { return SimpleType::base(kList, {std::move(element)}); }
}  // namespace builtin

}  // namespace sizax
