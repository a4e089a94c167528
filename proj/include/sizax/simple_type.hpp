#pragma once

#include <string>
#include <vector>

namespace sizax {

// Simple (unsized) types. Base types carry their type arguments, so the
// builtin `List` is monomorphized per element type (`List Nat`, `List a`).
// Atoms are opaque element types without constructors and without size.
// Meta variables only exist while simple types are being inferred.
struct SimpleType {
  enum class Kind { Base, Atom, Product, Arrow, Meta };

  Kind kind = Kind::Base;
  std::string name;
  std::vector<SimpleType> args;

  static SimpleType base(std::string name, std::vector<SimpleType> args = {});
  static SimpleType atom(std::string name);
  static SimpleType product(SimpleType left, SimpleType right);
  static SimpleType arrow(SimpleType from, SimpleType to);
  static SimpleType meta(int id);

  // Builds t1 -> t2 -> ... -> result.
  static SimpleType arrows(const std::vector<SimpleType>& domains, SimpleType result);

  bool is_base() const { return kind == Kind::Base; }
  bool is_arrow() const { return kind == Kind::Arrow; }
  bool is_product() const { return kind == Kind::Product; }

  const SimpleType& left() const { return args[0]; }
  const SimpleType& right() const { return args[1]; }

  // Splits off up to `count` leading arrows; count < 0 means all of them.
  std::pair<std::vector<SimpleType>, SimpleType> uncurry(int count = -1) const;
  int arrow_count() const;

  // True if the type contains no arrow anywhere (including type arguments).
  bool first_order() const;

  bool operator==(const SimpleType& other) const;
  bool operator!=(const SimpleType& other) const { return !(*this == other); }
  bool operator<(const SimpleType& other) const;
};

std::string to_string(const SimpleType& type);

namespace builtin {
inline constexpr const char* kNat = "Nat";
inline constexpr const char* kList = "List";
inline constexpr const char* kZero = "0";
inline constexpr const char* kSucc = "Succ";
inline constexpr const char* kNil = "Nil";
inline constexpr const char* kCons = "Cons";
inline constexpr const char* kPair = "Pair";

SimpleType nat();
SimpleType list(SimpleType element);
}  // namespace builtin

}  // namespace sizax
