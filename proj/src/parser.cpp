#include "sizax/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace sizax {

namespace {

enum class Tok { Lower, Upper, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceLoc loc;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '#';
}

std::vector<Token> lex(const std::string& text, int firstLine = 1) {
  static const std::vector<std::string> puncts = {":::", "::", "->", "=", "(", ")", "[", "]", ",",
                                                  ":",   "\\", ".",  "+", "*", "|"};
  std::vector<Token> out;
  int line = firstLine, col = 1;
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    SourceLoc loc{line, col};
    size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      out.push_back({Tok::Number, text.substr(start, i - start), loc});
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < text.size() && ident_char(text[i])) ++i;
      std::string word = text.substr(start, i - start);
      out.push_back({std::isupper(static_cast<unsigned char>(c)) ? Tok::Upper : Tok::Lower, word, loc});
    } else {
      bool matched = false;
      for (const auto& p : puncts) {
        if (text.compare(i, p.size(), p) == 0) {
          out.push_back({Tok::Punct, p, loc});
          i += p.size();
          matched = true;
          break;
        }
      }
      if (!matched) throw Error(ErrorKind::Syntax, std::string("unexpected character '") + c + "'", loc);
    }
    col += static_cast<int>(i - start);
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

const std::set<std::string> kUnsupportedKeywords = {"case", "of", "if", "then", "else", "let", "in", "where"};

class TokenStream {
public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is(const std::string& punct, size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Punct && peek(ahead).text == punct;
  }
  bool accept(const std::string& punct) {
    if (!is(punct)) return false;
    next();
    return true;
  }
  Token expect(const std::string& punct) {
    if (!is(punct)) fail("expected '" + punct + "'");
    return next();
  }
  Token expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what);
    return next();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw Error(ErrorKind::Syntax, msg + ", found " + found, t.loc);
  }
  void expect_end() {
    if (!at_end()) fail("unexpected trailing input");
  }

private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
};

// ---- simple types ----

SimpleType parse_simple(TokenStream& ts);

SimpleType parse_simple_atom(TokenStream& ts) {
  const Token& t = ts.peek();
  if (t.kind == Tok::Lower) return SimpleType::atom(ts.next().text);
  if (t.kind == Tok::Upper) {
    std::string name = ts.next().text;
    if (name == builtin::kList) return builtin::list(parse_simple_atom(ts));
    return SimpleType::base(name);
  }
  if (ts.accept("[")) {
    SimpleType elem = parse_simple(ts);
    ts.expect("]");
    return builtin::list(elem);
  }
  if (ts.accept("(")) {
    SimpleType first = parse_simple(ts);
    if (ts.accept(",")) {
      SimpleType second = parse_simple(ts);
      ts.expect(")");
      return SimpleType::product(first, second);
    }
    ts.expect(")");
    return first;
  }
  ts.fail("expected a type");
}

SimpleType parse_simple(TokenStream& ts) {
  SimpleType dom = parse_simple_atom(ts);
  if (ts.accept("->")) return SimpleType::arrow(dom, parse_simple(ts));
  return dom;
}

// ---- index terms ----

IndexTerm parse_index_expr(TokenStream& ts);

std::vector<IndexTerm> parse_index_args(TokenStream& ts) {
  std::vector<IndexTerm> args;
  ts.expect("(");
  if (ts.accept(")")) return args;
  do {
    args.push_back(parse_index_expr(ts));
  } while (ts.accept(","));
  ts.expect(")");
  return args;
}

IndexTerm parse_index_atom(TokenStream& ts) {
  const Token& t = ts.peek();
  if (t.kind == Tok::Number) return IndexTerm::numeral(static_cast<unsigned>(std::stoul(ts.next().text)));
  if (t.kind == Tok::Lower || t.kind == Tok::Upper) {
    Token id = ts.next();
    if (id.kind == Tok::Lower && id.text == "s" && ts.is("(")) {
      auto args = parse_index_args(ts);
      if (args.size() != 1) throw Error(ErrorKind::Syntax, "s takes exactly one argument", id.loc);
      return IndexTerm::succ(args[0]);
    }
    // Unknown symbols are capitalised, so `L i (a, a)` reads i as a variable.
    if (id.kind == Tok::Upper) return IndexTerm::sym(id.text, ts.is("(") ? parse_index_args(ts) : std::vector<IndexTerm>{});
    return IndexTerm::var(id.text);
  }
  if (ts.accept("(")) {
    IndexTerm e = parse_index_expr(ts);
    ts.expect(")");
    return e;
  }
  ts.fail("expected an index term");
}

bool as_numeral(const IndexTerm& t, unsigned& n) {
  n = 0;
  const IndexTerm* cur = &t;
  while (cur->kind == IndexTerm::Kind::Succ) {
    ++n;
    cur = &cur->args[0];
  }
  return cur->kind == IndexTerm::Kind::Zero;
}

IndexTerm parse_index_product(TokenStream& ts) {
  IndexTerm acc = parse_index_atom(ts);
  while (ts.accept("*")) acc = IndexTerm::mul(acc, parse_index_atom(ts));
  return acc;
}

// Numeric summands are folded into successors: t + 2 is s(s(t)).
IndexTerm parse_index_expr(TokenStream& ts) {
  IndexTerm acc = parse_index_product(ts);
  while (ts.accept("+")) {
    IndexTerm rhs = parse_index_product(ts);
    unsigned n = 0;
    if (as_numeral(rhs, n))
      acc = IndexTerm::numeral(n, acc);
    else if (as_numeral(acc, n))
      acc = IndexTerm::numeral(n, rhs);
    else
      acc = IndexTerm::plus(acc, rhs);
  }
  return acc;
}

// ---- sized types ----

SizedType parse_sized(TokenStream& ts);

SizedType parse_sized_atom(TokenStream& ts) {
  const Token& t = ts.peek();
  if (t.kind == Tok::Lower) {
    if (t.text == "forall") ts.fail("quantifier must be parenthesized here");
    return SizedType::atom(ts.next().text);
  }
  if (t.kind == Tok::Upper) {
    std::string name = ts.next().text;
    if (name == "L" || name == builtin::kList) {
      IndexTerm idx = parse_index_atom(ts);
      SimpleType elem = parse_simple_atom(ts);
      return SizedType::base(builtin::kList, idx, {elem});
    }
    return SizedType::base(name, parse_index_atom(ts));
  }
  if (ts.accept("(")) {
    SizedType first = parse_sized(ts);
    if (ts.accept(",")) {
      SizedType second = parse_sized(ts);
      ts.expect(")");
      return SizedType::product(first, second);
    }
    ts.expect(")");
    return first;
  }
  ts.fail("expected a sized type");
}

SizedType parse_sized(TokenStream& ts) {
  if (ts.peek().kind == Tok::Lower && ts.peek().text == "forall") {
    ts.next();
    std::vector<std::string> vars;
    while (ts.peek().kind == Tok::Lower) vars.push_back(ts.next().text);
    if (vars.empty()) ts.fail("expected quantified index variables");
    ts.expect(".");
    return SizedType::forall(vars, parse_sized(ts));
  }
  SizedType dom = parse_sized_atom(ts);
  if (ts.accept("->")) return SizedType::arrow(dom, parse_sized(ts));
  return dom;
}

}  // namespace

SimpleType parse_simple_type(const std::string& text) {
  TokenStream ts(lex(text));
  SimpleType t = parse_simple(ts);
  ts.expect_end();
  return t;
}

SizedType parse_sized_type(const std::string& text) {
  TokenStream ts(lex(text));
  SizedType t = parse_sized(ts);
  ts.expect_end();
  return t;
}

IndexTerm parse_index_term(const std::string& text) {
  TokenStream ts(lex(text));
  IndexTerm t = parse_index_expr(ts);
  ts.expect_end();
  return t;
}

namespace {

struct RawExpr {
  enum class K { Lower, Upper, Num, App, Lam };
  K kind = K::Lower;
  std::string name;
  unsigned num = 0;
  std::vector<RawExpr> kids;
  std::vector<std::string> params;
  SourceLoc loc;

  static RawExpr leaf(K k, std::string name, SourceLoc loc) {
    RawExpr e;
    e.kind = k;
    e.name = std::move(name);
    e.loc = loc;
    return e;
  }
  static RawExpr app(RawExpr f, RawExpr a) {
    RawExpr e;
    e.kind = K::App;
    e.loc = f.loc;
    e.kids = {std::move(f), std::move(a)};
    return e;
  }
  static RawExpr app2(const std::string& con, RawExpr a, RawExpr b, SourceLoc loc) {
    return app(app(leaf(K::Upper, con, loc), std::move(a)), std::move(b));
  }
};

void reject_keyword(const Token& t) {
  if (t.kind == Tok::Lower && kUnsupportedKeywords.count(t.text))
    throw Error(ErrorKind::Unsupported, "'" + t.text + "' expressions are not supported; use equations", t.loc);
}

RawExpr parse_expr(TokenStream& ts);

bool starts_atom(const TokenStream& ts) {
  const Token& t = ts.peek();
  return t.kind == Tok::Lower || t.kind == Tok::Upper || t.kind == Tok::Number || ts.is("[") || ts.is("(");
}

RawExpr parse_lambda(TokenStream& ts) {
  Token start = ts.expect("\\");
  RawExpr e;
  e.kind = RawExpr::K::Lam;
  e.loc = start.loc;
  while (ts.peek().kind == Tok::Lower) {
    reject_keyword(ts.peek());
    e.params.push_back(ts.next().text);
  }
  if (e.params.empty()) ts.fail("expected lambda parameters");
  ts.expect(".");
  e.kids.push_back(parse_expr(ts));
  return e;
}

RawExpr parse_atom(TokenStream& ts) {
  const Token& t = ts.peek();
  reject_keyword(t);
  if (t.kind == Tok::Lower || t.kind == Tok::Upper) {
    Token id = ts.next();
    return RawExpr::leaf(id.kind == Tok::Lower ? RawExpr::K::Lower : RawExpr::K::Upper, id.text, id.loc);
  }
  if (t.kind == Tok::Number) {
    Token n = ts.next();
    RawExpr e = RawExpr::leaf(RawExpr::K::Num, "", n.loc);
    e.num = static_cast<unsigned>(std::stoul(n.text));
    return e;
  }
  if (ts.is("[")) {
    SourceLoc loc = ts.next().loc;
    std::vector<RawExpr> elems;
    if (!ts.is("]")) {
      do {
        elems.push_back(parse_expr(ts));
      } while (ts.accept(","));
    }
    ts.expect("]");
    RawExpr acc = RawExpr::leaf(RawExpr::K::Upper, builtin::kNil, loc);
    for (auto it = elems.rbegin(); it != elems.rend(); ++it) acc = RawExpr::app2(builtin::kCons, *it, acc, loc);
    return acc;
  }
  if (ts.is("(")) {
    SourceLoc loc = ts.next().loc;
    if (ts.is(":") && ts.is(")", 1)) {
      ts.next();
      ts.next();
      return RawExpr::leaf(RawExpr::K::Upper, builtin::kCons, loc);
    }
    RawExpr first = parse_expr(ts);
    if (ts.accept(",")) {
      RawExpr second = parse_expr(ts);
      ts.expect(")");
      return RawExpr::app2(builtin::kPair, first, second, loc);
    }
    ts.expect(")");
    return first;
  }
  ts.fail("expected an expression");
}

RawExpr parse_application(TokenStream& ts) {
  RawExpr acc = parse_atom(ts);
  while (true) {
    if (ts.is("\\")) return RawExpr::app(acc, parse_lambda(ts));
    if (!starts_atom(ts)) return acc;
    acc = RawExpr::app(acc, parse_atom(ts));
  }
}

RawExpr parse_expr(TokenStream& ts) {
  if (ts.is("\\")) return parse_lambda(ts);
  RawExpr head = parse_application(ts);
  if (ts.is(":")) {
    SourceLoc loc = ts.next().loc;
    return RawExpr::app2(builtin::kCons, head, parse_expr(ts), loc);
  }
  return head;
}

// ---- patterns ----

struct PatternContext {
  int wildcards = 0;
};

Pattern parse_pattern(TokenStream& ts, PatternContext& pc);

Pattern numeral_pattern(unsigned n, SourceLoc loc) {
  Pattern p = Pattern::con(builtin::kZero, {}, loc);
  for (unsigned i = 0; i < n; ++i) p = Pattern::con(builtin::kSucc, {p}, loc);
  return p;
}

Pattern parse_pattern_atom(TokenStream& ts, PatternContext& pc) {
  const Token& t = ts.peek();
  if (t.kind == Tok::Lower) {
    reject_keyword(t);
    Token v = ts.next();
    if (v.text == "_") return Pattern::var("_w" + std::to_string(++pc.wildcards), v.loc);
    return Pattern::var(v.text, v.loc);
  }
  if (t.kind == Tok::Upper) {
    Token c = ts.next();
    return Pattern::con(c.text, {}, c.loc);
  }
  if (t.kind == Tok::Number) {
    Token n = ts.next();
    return numeral_pattern(static_cast<unsigned>(std::stoul(n.text)), n.loc);
  }
  if (ts.is("[")) {
    SourceLoc loc = ts.next().loc;
    std::vector<Pattern> elems;
    if (!ts.is("]")) {
      do {
        elems.push_back(parse_pattern(ts, pc));
      } while (ts.accept(","));
    }
    ts.expect("]");
    Pattern acc = Pattern::con(builtin::kNil, {}, loc);
    for (auto it = elems.rbegin(); it != elems.rend(); ++it) acc = Pattern::con(builtin::kCons, {*it, acc}, loc);
    return acc;
  }
  if (ts.is("(")) {
    SourceLoc loc = ts.next().loc;
    Pattern first = parse_pattern(ts, pc);
    if (ts.accept(",")) {
      Pattern second = parse_pattern(ts, pc);
      ts.expect(")");
      return Pattern::con(builtin::kPair, {first, second}, loc);
    }
    ts.expect(")");
    return first;
  }
  ts.fail("expected a pattern");
}

bool starts_pattern_atom(const TokenStream& ts) {
  const Token& t = ts.peek();
  return t.kind == Tok::Lower || t.kind == Tok::Upper || t.kind == Tok::Number || ts.is("[") || ts.is("(");
}

Pattern parse_pattern(TokenStream& ts, PatternContext& pc) {
  Pattern head;
  if (ts.peek().kind == Tok::Upper) {
    Token c = ts.next();
    std::vector<Pattern> args;
    while (starts_pattern_atom(ts)) args.push_back(parse_pattern_atom(ts, pc));
    head = Pattern::con(c.text, std::move(args), c.loc);
  } else {
    head = parse_pattern_atom(ts, pc);
  }
  if (ts.is(":")) {
    SourceLoc loc = ts.next().loc;
    return Pattern::con(builtin::kCons, {head, parse_pattern(ts, pc)}, loc);
  }
  return head;
}

// ---- name resolution and lambda lifting ----

class Resolver {
public:
  Resolver(const Program& program, std::set<std::string> functions)
      : program_(program), functions_(std::move(functions)) {}

  TermPtr resolve(const RawExpr& e, const std::vector<std::string>& scope, const std::string& enclosing) {
    using K = RawExpr::K;
    switch (e.kind) {
      case K::Lower:
        if (std::find(scope.begin(), scope.end(), e.name) != scope.end()) return Term::var(e.name, e.loc);
        if (functions_.count(e.name)) return Term::fun(e.name, e.loc);
        throw Error(ErrorKind::UnknownIdentifier, "unknown identifier " + e.name, e.loc);
      case K::Upper:
        if (program_.is_constructor(e.name)) return Term::con(e.name, e.loc);
        throw Error(ErrorKind::UnknownIdentifier, "unknown constructor " + e.name, e.loc);
      case K::Num: {
        TermPtr t = Term::con(builtin::kZero, e.loc);
        for (unsigned i = 0; i < e.num; ++i) t = Term::app(Term::con(builtin::kSucc, e.loc), t, e.loc);
        return t;
      }
      case K::App:
        return Term::app(resolve(e.kids[0], scope, enclosing), resolve(e.kids[1], scope, enclosing), e.loc);
      case K::Lam:
        return lift(e, scope, enclosing);
    }
    return nullptr;
  }

  std::vector<FunctionDef>& lifted() { return lifted_; }

private:
  static void free_lowers(const RawExpr& e, std::vector<std::string>& bound, std::vector<std::string>& out) {
    using K = RawExpr::K;
    if (e.kind == K::Lower) {
      if (std::find(bound.begin(), bound.end(), e.name) == bound.end() &&
          std::find(out.begin(), out.end(), e.name) == out.end())
        out.push_back(e.name);
    } else if (e.kind == K::Lam) {
      size_t mark = bound.size();
      bound.insert(bound.end(), e.params.begin(), e.params.end());
      free_lowers(e.kids[0], bound, out);
      bound.resize(mark);
    } else {
      for (const auto& k : e.kids) free_lowers(k, bound, out);
    }
  }

  std::string fresh_name(const std::string& enclosing) {
    int& counter = counters_[enclosing];
    std::string name;
    do {
      name = enclosing + "_l" + std::to_string(++counter);
    } while (functions_.count(name) || program_.is_constructor(name));
    functions_.insert(name);
    return name;
  }

  TermPtr lift(const RawExpr& e, const std::vector<std::string>& scope, const std::string& enclosing) {
    std::vector<std::string> bound, free;
    free_lowers(e, bound, free);
    std::vector<std::string> captured;
    for (const auto& v : free)
      if (std::find(scope.begin(), scope.end(), v) != scope.end()) captured.push_back(v);

    std::string name = fresh_name(enclosing);
    std::vector<std::string> inner = captured;
    inner.insert(inner.end(), e.params.begin(), e.params.end());

    FunctionDef def;
    def.name = name;
    def.loc = e.loc;
    def.lifted = true;
    Equation eq;
    eq.fun = name;
    eq.loc = e.loc;
    for (const auto& v : inner) eq.lhs.push_back(Pattern::var(v, e.loc));
    size_t slot = lifted_.size();
    lifted_.push_back(def);
    eq.rhs = resolve(e.kids[0], inner, enclosing);
    lifted_[slot].equations.push_back(std::move(eq));

    std::vector<TermPtr> args;
    for (const auto& v : captured) args.push_back(Term::var(v, e.loc));
    return apply_spine(Term::fun(name, e.loc), args);
  }

  const Program& program_;
  std::set<std::string> functions_;
  std::map<std::string, int> counters_;
  std::vector<FunctionDef> lifted_;
};

// ---- program structure ----

struct Group {
  std::vector<Token> tokens;
};

std::vector<Group> split_groups(const std::string& source) {
  std::vector<Group> groups;
  std::string current;
  int currentLine = 0;
  int line = 0;
  size_t pos = 0;
  auto flush = [&] {
    if (currentLine > 0) groups.push_back({lex(current, currentLine)});
    current.clear();
    currentLine = 0;
  };
  while (pos <= source.size()) {
    size_t end = source.find('\n', pos);
    if (end == std::string::npos) end = source.size();
    std::string text = source.substr(pos, end - pos);
    ++line;
    pos = end + 1;
    std::string code = text.substr(0, text.find("--"));
    bool blank = std::all_of(code.begin(), code.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    if (!blank) {
      bool continuation = std::isspace(static_cast<unsigned char>(code[0]));
      if (!continuation || currentLine == 0) {
        flush();
        currentLine = line;
      } else {
        current += "\n";
      }
      current += text;
    } else if (currentLine > 0) {
      current += "\n";
    }
    if (end == source.size()) break;
  }
  flush();
  return groups;
}

bool is_keyword_group(const Group& g, const char* word) {
  return g.tokens[0].kind == Tok::Lower && g.tokens[0].text == word;
}

FunctionDef& function_slot(Program& p, const std::string& name, SourceLoc loc) {
  if (FunctionDef* f = p.find(name)) return *f;
  FunctionDef def;
  def.name = name;
  def.loc = loc;
  p.functions.push_back(def);
  return p.functions.back();
}

void parse_data(TokenStream& ts, Program& p) {
  ts.next();  // data
  Token name = ts.expect(Tok::Upper, "a datatype name");
  if (p.is_datatype(name.text) || name.text == "L")
    throw Error(ErrorKind::Syntax, "datatype " + name.text + " is already defined", name.loc);
  ts.expect("=");
  DataDecl decl;
  decl.name = name.text;
  decl.loc = name.loc;
  p.datatypes.push_back(decl);
  do {
    Token con = ts.expect(Tok::Upper, "a constructor name");
    if (p.is_constructor(con.text))
      throw Error(ErrorKind::Syntax, "constructor " + con.text + " is already defined", con.loc);
    Constructor c{con.text, decl.name, {}};
    while (!ts.at_end() && !ts.is("|")) c.argTypes.push_back(parse_simple_atom(ts));
    p.datatypes.back().constructors.push_back(std::move(c));
  } while (ts.accept("|"));
  ts.expect_end();
}

}  // namespace

Program parse_program(const std::string& source) {
  Program program;
  std::vector<Group> groups = split_groups(source);

  // Pass 1: datatypes and the set of function names.
  std::set<std::string> functions;
  for (const auto& g : groups) {
    if (is_keyword_group(g, "data")) {
      TokenStream ts(g.tokens);
      parse_data(ts, program);
      continue;
    }
    const Token& head = g.tokens[0];
    reject_keyword(head);
    if (head.kind != Tok::Lower)
      throw Error(ErrorKind::Syntax, "expected a declaration or an equation, found '" + head.text + "'", head.loc);
    functions.insert(head.text);
    function_slot(program, head.text, head.loc);
  }

  // Pass 2: signatures and equations.
  Resolver resolver(program, functions);
  for (const auto& g : groups) {
    if (is_keyword_group(g, "data")) continue;
    TokenStream ts(g.tokens);
    Token head = ts.next();
    FunctionDef& f = *program.find(head.text);
    if (ts.accept("::")) {
      if (f.signature) throw Error(ErrorKind::Syntax, "duplicate signature for " + f.name, head.loc);
      f.signature = parse_simple(ts);
      ts.expect_end();
      continue;
    }
    if (ts.accept(":::")) {
      if (f.sized) throw Error(ErrorKind::Syntax, "duplicate sized signature for " + f.name, head.loc);
      f.sized = parse_sized(ts);
      ts.expect_end();
      continue;
    }
    Equation eq;
    eq.fun = head.text;
    eq.loc = head.loc;
    PatternContext pc;
    while (!ts.is("=")) {
      if (ts.at_end()) ts.fail("expected '='");
      eq.lhs.push_back(parse_pattern_atom(ts, pc));
    }
    ts.expect("=");
    RawExpr rhs = parse_expr(ts);
    ts.expect_end();
    eq.rhs = resolver.resolve(rhs, eq.lhs_vars(), head.text);
    program.find(head.text)->equations.push_back(std::move(eq));
  }

  for (auto& lifted : resolver.lifted()) program.functions.push_back(std::move(lifted));
  for (const auto& f : program.functions)
    if (f.equations.empty())
      throw Error(ErrorKind::WellFormedness, "function " + f.name + " has a signature but no equations", f.loc);
  return program;
}

TermPtr parse_value(const std::string& text, const Program& context) {
  TokenStream ts(lex(text));
  RawExpr e = parse_expr(ts);
  ts.expect_end();
  Resolver resolver(context, {});
  return resolver.resolve(e, {}, "value");
}

TermPtr parse_expression(const std::string& text, const Program& context) {
  TokenStream ts(lex(text));
  RawExpr e = parse_expr(ts);
  ts.expect_end();
  std::set<std::string> functions;
  for (const auto& f : context.functions) functions.insert(f.name);
  Resolver resolver(context, functions);
  TermPtr t = resolver.resolve(e, {}, "it");
  if (!resolver.lifted().empty()) throw Error(ErrorKind::Unsupported, "lambdas are not allowed in expressions");
  return t;
}

}  // namespace sizax
