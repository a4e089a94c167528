#include "sizax/polynomial.hpp"

#include <algorithm>

namespace sizax {

Monomial Monomial::variable(const std::string& name, unsigned exponent) {
  Monomial m;
  if (exponent > 0) m.factors_.emplace_back(name, exponent);
  return m;
}

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (const auto& f : factors_) d += f.second;
  return d;
}

unsigned Monomial::exponent_of(const std::string& name) const {
  for (const auto& [v, e] : factors_)
    if (v == name) return e;
  return 0;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial r;
  auto a = factors_.begin(), b = other.factors_.begin();
  while (a != factors_.end() || b != other.factors_.end()) {
    if (b == other.factors_.end() || (a != factors_.end() && a->first < b->first)) {
      r.factors_.push_back(*a++);
    } else if (a == factors_.end() || b->first < a->first) {
      r.factors_.push_back(*b++);
    } else {
      r.factors_.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  return r;
}

bool Monomial::operator<(const Monomial& other) const {
  unsigned d1 = degree(), d2 = other.degree();
  if (d1 != d2) return d1 < d2;
  return factors_ < other.factors_;
}

std::string Monomial::str() const {
  if (factors_.empty()) return "1";
  std::string s;
  for (const auto& [v, e] : factors_) {
    for (unsigned i = 0; i < e; ++i) {
      if (!s.empty()) s += "*";
      s += v;
    }
  }
  return s;
}

bool absolutely_positive(const Polynomial& p) {
  return std::all_of(p.terms().begin(), p.terms().end(), [](const auto& t) { return t.second >= 0; });
}

std::vector<std::pair<Monomial, std::int64_t>> display_order(const Polynomial& p) {
  std::vector<std::pair<Monomial, std::int64_t>> out(p.terms().begin(), p.terms().end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.first.degree() > b.first.degree(); });
  return out;
}

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (const auto& [m, c] : display_order(p)) {
    std::int64_t mag = c < 0 ? -c : c;
    std::string piece;
    if (m.is_constant())
      piece = std::to_string(mag);
    else if (mag == 1)
      piece = m.str();
    else
      piece = std::to_string(mag) + "*" + m.str();
    if (s.empty())
      s = (c < 0 ? "-" : "") + piece;
    else
      s += (c < 0 ? " - " : " + ") + piece;
  }
  return s;
}

static void extend(const std::vector<std::string>& vars, size_t from, unsigned budget, Monomial cur,
                   std::vector<Monomial>& out) {
  out.push_back(cur);
  if (budget == 0) return;
  for (size_t i = from; i < vars.size(); ++i) extend(vars, i, budget - 1, cur * Monomial::variable(vars[i]), out);
}

std::vector<Monomial> monomials_up_to(const std::vector<std::string>& vars, unsigned maxDegree) {
  std::vector<Monomial> out;
  extend(vars, 0, maxDegree, Monomial{}, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace sizax
