#include "sizax/constraint.hpp"

#include <algorithm>
#include <sstream>

#include "sizax/parser.hpp"

namespace sizax {

std::string Origin::str() const {
  std::string out = function.empty() ? "?" : function;
  if (loc.valid()) out += "@" + loc.str();
  if (!rule.empty()) out += " " + rule;
  return out;
}

std::string Constraint::str() const { return to_string(lhs) + " <= " + to_string(rhs); }

void ConstraintSet::note_symbols(const Constraint& c) {
  std::map<std::string, size_t> lhsSyms, rhsSyms;
  c.lhs.collect_symbols(lhsSyms);
  c.rhs.collect_symbols(rhsSyms);
  for (const auto* syms : {&lhsSyms, &rhsSyms})
    for (const auto& [name, arity] : *syms) declare_symbol(name, arity);
  for (const auto& [r, _] : rhsSyms)
    for (const auto& [l, __] : lhsSyms)
      if (l != r) deps_[r].insert(l);
  // Symbols sharing a right-hand side are chosen together.
  for (const auto& [r, _] : rhsSyms)
    for (const auto& [s, __] : rhsSyms)
      if (r != s) deps_[r].insert(s);
}

void ConstraintSet::add(Constraint c) {
  note_symbols(c);
  constraints_.push_back(std::move(c));
}

void ConstraintSet::merge(const ConstraintSet& other) {
  for (const auto& name : other.order_)
    declare_symbol(name, other.arities_.at(name), other.owners_.count(name) ? other.owners_.at(name) : "");
  for (const auto& c : other.constraints_) add(c);
}

void ConstraintSet::declare_symbol(const std::string& name, size_t arity, const std::string& owner) {
  auto it = arities_.find(name);
  if (it == arities_.end()) {
    arities_[name] = arity;
    order_.push_back(name);
    deps_[name];
  } else if (it->second != arity) {
    throw Error(ErrorKind::ArityMismatch, "index symbol " + name + " used with arities " +
                                              std::to_string(it->second) + " and " + std::to_string(arity));
  }
  if (!owner.empty()) owners_[name] = owner;
}

std::vector<std::string> ConstraintSet::symbols() const { return order_; }

std::string export_constraints(const ConstraintSet& cs) {
  std::vector<const Constraint*> sorted;
  for (const auto& c : cs.constraints()) sorted.push_back(&c);
  std::stable_sort(sorted.begin(), sorted.end(), [](const Constraint* a, const Constraint* b) { return a->scc < b->scc; });
  std::ostringstream out;
  bool first = true;
  int current = 0;
  for (const auto* c : sorted) {
    if (first || c->scc != current) {
      out << "-- scc " << c->scc << "\n";
      current = c->scc;
      first = false;
    }
    out << c->str() << " ; " << c->origin.str() << "\n";
  }
  return out.str();
}

ConstraintSet import_constraints(const std::string& text) {
  ConstraintSet cs;
  std::istringstream in(text);
  std::string line;
  int scc = -1;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line.rfind("-- scc ", 0) == 0) {
      scc = std::stoi(line.substr(7));
      continue;
    }
    if (line.rfind("--", 0) == 0) continue;
    std::string body = line, origin;
    if (auto semi = line.find(';'); semi != std::string::npos) {
      body = line.substr(0, semi);
      origin = line.substr(semi + 1);
    }
    auto le = body.find("<=");
    if (le == std::string::npos)
      throw Error(ErrorKind::Syntax, "expected 'lhs <= rhs'", SourceLoc{lineNo, 1});
    Constraint c;
    try {
      c.lhs = parse_index_term(body.substr(0, le));
      c.rhs = parse_index_term(body.substr(le + 2));
    } catch (const Error& e) {
      throw Error(ErrorKind::Syntax, std::string("in constraint: ") + e.what(), SourceLoc{lineNo, 1});
    }
    size_t start = origin.find_first_not_of(' ');
    if (start != std::string::npos) {
      origin = origin.substr(start);
      std::string head = origin.substr(0, origin.find(' '));
      c.origin.rule = head.size() < origin.size() ? origin.substr(head.size() + 1) : "";
      auto at = head.find('@');
      c.origin.function = head.substr(0, at);
      if (at != std::string::npos) {
        std::string pos = head.substr(at + 1);
        auto colon = pos.find(':');
        if (colon != std::string::npos) {
          c.origin.loc.line = std::stoi(pos.substr(0, colon));
          c.origin.loc.column = std::stoi(pos.substr(colon + 1));
        }
      }
    }
    c.scc = scc;
    cs.add(c);
  }
  return cs;
}

}  // namespace sizax
