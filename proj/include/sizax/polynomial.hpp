#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace sizax {

// A power product of named variables, kept sorted by name with positive
// exponents. The empty monomial is the constant 1.
class Monomial {
public:
  Monomial() = default;
  static Monomial variable(const std::string& name, unsigned exponent = 1);

  const std::vector<std::pair<std::string, unsigned>>& factors() const { return factors_; }
  unsigned degree() const;
  bool is_constant() const { return factors_.empty(); }
  unsigned exponent_of(const std::string& name) const;

  Monomial operator*(const Monomial& other) const;

  bool operator==(const Monomial& other) const { return factors_ == other.factors_; }
  // Graded order: lower degree first, then lexicographic on factors.
  bool operator<(const Monomial& other) const;

  std::string str() const;

private:
  std::vector<std::pair<std::string, unsigned>> factors_;
};

template <class C>
class BasicPolynomial;

namespace detail {
template <class C>
bool is_zero(const C& c) {
  if constexpr (std::is_arithmetic_v<C>)
    return c == 0;
  else
    return c.is_zero();
}
}  // namespace detail

// Multivariate polynomial with coefficients in the ring C. Instantiated with
// int64 (concrete interpretations, difference polynomials) and with
// BasicPolynomial<int64> (solver templates whose coefficients are themselves
// polynomials over coefficient unknowns).
template <class C>
class BasicPolynomial {
public:
  using Coefficient = C;
  using Terms = std::map<Monomial, C>;

  BasicPolynomial() = default;
  BasicPolynomial(std::int64_t constant) { add_term(Monomial{}, C(constant)); }  // NOLINT

  static BasicPolynomial constant(C c) {
    BasicPolynomial p;
    p.add_term(Monomial{}, std::move(c));
    return p;
  }
  static BasicPolynomial variable(const std::string& name) {
    BasicPolynomial p;
    p.add_term(Monomial::variable(name), C(1));
    return p;
  }
  static BasicPolynomial term(const Monomial& m, C c) {
    BasicPolynomial p;
    p.add_term(m, std::move(c));
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  C coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? C(0) : it->second;
  }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }

  void add_term(const Monomial& m, C c) {
    if (detail::is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second = it->second + c;
      if (detail::is_zero(it->second)) terms_.erase(it);
    }
  }

  BasicPolynomial operator+(const BasicPolynomial& o) const {
    BasicPolynomial r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
  }
  BasicPolynomial operator-() const {
    BasicPolynomial r;
    for (const auto& [m, c] : terms_) r.add_term(m, C(0) - c);
    return r;
  }
  BasicPolynomial operator-(const BasicPolynomial& o) const { return *this + (-o); }
  BasicPolynomial operator*(const BasicPolynomial& o) const {
    BasicPolynomial r;
    for (const auto& [m1, c1] : terms_)
      for (const auto& [m2, c2] : o.terms_) r.add_term(m1 * m2, c1 * c2);
    return r;
  }
  BasicPolynomial& operator+=(const BasicPolynomial& o) { return *this = *this + o; }

  bool operator==(const BasicPolynomial& o) const { return terms_ == o.terms_; }
  bool operator!=(const BasicPolynomial& o) const { return !(*this == o); }

  BasicPolynomial pow(unsigned e) const {
    BasicPolynomial r(1);
    for (unsigned i = 0; i < e; ++i) r = r * *this;
    return r;
  }

  // Simultaneous substitution of variables by polynomials; variables not in
  // the map are left unchanged.
  BasicPolynomial compose(const std::map<std::string, BasicPolynomial>& subst) const {
    BasicPolynomial r;
    for (const auto& [m, c] : terms_) {
      BasicPolynomial prod = constant(c);
      for (const auto& [v, e] : m.factors()) {
        auto it = subst.find(v);
        prod = prod * (it == subst.end() ? term(Monomial::variable(v, e), C(1)) : it->second.pow(e));
      }
      r += prod;
    }
    return r;
  }

  // Coefficient-wise map into another coefficient ring.
  template <class D, class F>
  BasicPolynomial<D> map_coefficients(F&& f) const {
    BasicPolynomial<D> r;
    for (const auto& [m, c] : terms_) r.add_term(m, f(c));
    return r;
  }

  template <class Value, class Lookup>
  Value evaluate(Lookup&& lookup) const
    requires std::is_arithmetic_v<C>
  {
    Value total = 0;
    for (const auto& [m, c] : terms_) {
      Value prod = static_cast<Value>(c);
      for (const auto& [v, e] : m.factors()) {
        Value x = lookup(v);
        for (unsigned i = 0; i < e; ++i) prod *= x;
      }
      total += prod;
    }
    return total;
  }

  std::vector<std::string> variables() const {
    std::vector<std::string> out;
    for (const auto& [m, c] : terms_)
      for (const auto& [v, e] : m.factors()) out.push_back(v);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

private:
  Terms terms_;
};

using Polynomial = BasicPolynomial<std::int64_t>;
using SymbolicPolynomial = BasicPolynomial<Polynomial>;

// All coefficients >= 0 (absolute positiveness of the polynomial).
bool absolutely_positive(const Polynomial& p);

// Terms by descending degree, ascending order within a degree: i*j + i + j + 2.
std::vector<std::pair<Monomial, std::int64_t>> display_order(const Polynomial& p);

std::string to_string(const Polynomial& p);

// Monomials over `vars` of total degree <= maxDegree, in graded order.
std::vector<Monomial> monomials_up_to(const std::vector<std::string>& vars, unsigned maxDegree);

}  // namespace sizax
