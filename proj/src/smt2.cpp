#include "tkc/smt2.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <variant>

#include "tkc/errors.hpp"

namespace tkc {

namespace {

struct Token {
  enum Kind { Open, Close, Symbol, Number, End } kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip();
    const std::size_t line = line_, column = column_;
    if (pos_ >= text_.size()) return {Token::End, "", line, column};
    const char c = text_[pos_];
    if (c == '(') {
      advance();
      return {Token::Open, "(", line, column};
    }
    if (c == ')') {
      advance();
      return {Token::Close, ")", line, column};
    }
    if (c == '|') {
      advance();
      std::string s;
      while (pos_ < text_.size() && text_[pos_] != '|') s += advance();
      if (pos_ >= text_.size()) throw ParseError("unterminated quoted symbol", line, column);
      advance();
      return {Token::Symbol, s, line, column};
    }
    if (c == '"') throw ParseError("string literals are not supported", line, column);
    std::string s;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';') {
      s += advance();
    }
    const bool numeric = std::isdigit(static_cast<unsigned char>(s[0])) != 0;
    return {numeric ? Token::Number : Token::Symbol, s, line, column};
  }

 private:
  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }
  void skip() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        advance();
      } else if (text_[pos_] == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

/// S-expression tree with source positions.
struct Sexp {
  Token head;  // atom token, or the '(' token for lists
  std::vector<Sexp> items;
  bool isList() const { return head.kind == Token::Open; }
  bool isSymbol(std::string_view s) const { return head.kind == Token::Symbol && head.text == s; }
};

Sexp readSexp(Lexer& lex, Token tok) {
  if (tok.kind == Token::Close) throw ParseError("unexpected ')'", tok.line, tok.column);
  if (tok.kind == Token::End) throw ParseError("unexpected end of input", tok.line, tok.column);
  Sexp s{tok, {}};
  if (tok.kind != Token::Open) return s;
  for (;;) {
    Token t = lex.next();
    if (t.kind == Token::Close) return s;
    if (t.kind == Token::End) throw ParseError("unbalanced '('", tok.line, tok.column);
    s.items.push_back(readSexp(lex, t));
  }
}

[[noreturn]] void fail(const Sexp& at, const std::string& what) {
  throw ParseError(what, at.head.line, at.head.column);
}

Rational parseNumber(const Sexp& s) {
  const std::string& t = s.head.text;
  const auto dot = t.find('.');
  try {
    if (dot == std::string::npos) return Rational(t, 10);
    std::string digits = t.substr(0, dot) + t.substr(dot + 1);
    Rational r(digits, 10);
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, t.size() - dot - 1);
    r /= scale;
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    fail(s, "malformed number '" + t + "'");
  }
}

enum class Sort { Bool, Real };

/// Linear term: coefficients plus a constant.
struct Linear {
  std::map<std::string, Rational> coeffs;
  Rational constant;

  bool isConstant() const { return coeffs.empty(); }
  void scale(const Rational& k) {
    for (auto& [v, c] : coeffs) c *= k;
    constant *= k;
  }
  void add(const Linear& o, const Rational& k) {
    for (const auto& [v, c] : o.coeffs) {
      coeffs[v] += k * c;
      if (coeffs[v] == 0) coeffs.erase(v);
    }
    constant += k * o.constant;
  }
};

class Parser {
 public:
  Parser(Context& ctx) : ctx_(ctx) {}

  ParsedProblem run(std::string_view text) {
    Lexer lex(text);
    std::vector<FormulaId> asserts;
    for (Token t = lex.next(); t.kind != Token::End; t = lex.next()) {
      const Sexp cmd = readSexp(lex, t);
      if (!cmd.isList() || cmd.items.empty() || cmd.items[0].head.kind != Token::Symbol) {
        fail(cmd, "expected a command");
      }
      const std::string& name = cmd.items[0].head.text;
      if (name == "set-logic") {
        if (cmd.items.size() != 2 || !(cmd.items[1].isSymbol("QF_LRA") || cmd.items[1].isSymbol("QF_RDL") ||
                                       cmd.items[1].isSymbol("QF_UF") || cmd.items[1].isSymbol("ALL"))) {
          fail(cmd, "unsupported logic");
        }
      } else if (name == "set-info" || name == "set-option" || name == "check-sat" ||
                 name == "exit" || name == "get-model" || name == "get-info") {
        // ignored
      } else if (name == "declare-fun") {
        if (cmd.items.size() != 4 || !cmd.items[2].isList() || !cmd.items[2].items.empty()) {
          fail(cmd, "only nullary declare-fun is supported");
        }
        declare(cmd.items[1], cmd.items[3]);
      } else if (name == "declare-const") {
        if (cmd.items.size() != 3) fail(cmd, "malformed declare-const");
        declare(cmd.items[1], cmd.items[2]);
      } else if (name == "assert") {
        if (cmd.items.size() != 2) fail(cmd, "assert takes one term");
        asserts.push_back(formula(cmd.items[1]));
      } else {
        fail(cmd.items[0], "unsupported command '" + name + "'");
      }
    }
    return {ctx_.terms().mkAnd(asserts), std::move(atoms_)};
  }

 private:
  void declare(const Sexp& sym, const Sexp& sort) {
    if (sym.head.kind != Token::Symbol) fail(sym, "expected a symbol");
    Sort s;
    if (sort.isSymbol("Bool")) {
      s = Sort::Bool;
    } else if (sort.isSymbol("Real")) {
      s = Sort::Real;
    } else {
      fail(sort, "unsupported sort (only Bool and Real)");
    }
    if (!sorts_.emplace(sym.head.text, s).second) fail(sym, "symbol '" + sym.head.text + "' redeclared");
  }

  FormulaId note(FormulaId lit) {
    const FormulaNode& n = ctx_.terms().node(lit);
    if (n.op == Op::Lit) {
      const Atom& a = ctx_.atom(n.symbol);
      if (!atoms_.indexOf(a)) atoms_.add(a);
    }
    return lit;
  }

  Sort sortOf(const Sexp& s) {
    if (!s.isList()) {
      if (s.head.kind == Token::Number) return Sort::Real;
      if (s.isSymbol("true") || s.isSymbol("false")) return Sort::Bool;
      auto it = sorts_.find(s.head.text);
      if (it == sorts_.end()) fail(s, "undeclared symbol '" + s.head.text + "'");
      return it->second;
    }
    if (s.items.empty()) fail(s, "empty application");
    static const std::set<std::string> real{"+", "-", "*", "/"};
    return real.contains(s.items[0].head.text) ? Sort::Real : Sort::Bool;
  }

  FormulaId formula(const Sexp& s) {
    FormulaStore& st = ctx_.terms();
    if (!s.isList()) {
      if (s.isSymbol("true")) return st.top();
      if (s.isSymbol("false")) return st.bottom();
      if (s.head.kind == Token::Number) fail(s, "expected a Boolean term, got a number");
      auto it = sorts_.find(s.head.text);
      if (it == sorts_.end()) fail(s, "undeclared symbol '" + s.head.text + "'");
      if (it->second != Sort::Bool) fail(s, "'" + s.head.text + "' is not Boolean");
      return note(ctx_.boolean(s.head.text));
    }
    if (s.items.empty() || s.items[0].head.kind != Token::Symbol) fail(s, "expected an operator");
    const std::string& op = s.items[0].head.text;
    const std::size_t n = s.items.size() - 1;
    auto args = [&] {
      std::vector<FormulaId> out;
      for (std::size_t i = 1; i <= n; ++i) out.push_back(formula(s.items[i]));
      return out;
    };
    if (op == "not") {
      if (n != 1) fail(s, "not takes one argument");
      return st.mkNot(formula(s.items[1]));
    }
    if (op == "and") return st.mkAnd(args());
    if (op == "or") return st.mkOr(args());
    if (op == "=>") {
      if (n < 2) fail(s, "=> takes at least two arguments");
      const auto a = args();
      FormulaId r = a.back();
      for (std::size_t i = a.size() - 1; i-- > 0;) r = st.mkImplies(a[i], r);
      return r;
    }
    if (op == "xor") {
      if (n < 2) fail(s, "xor takes at least two arguments");
      const auto a = args();
      FormulaId r = a[0];
      for (std::size_t i = 1; i < a.size(); ++i) r = st.mkNot(st.mkIff(r, a[i]));
      return r;
    }
    if (op == "iff") {
      if (n != 2) fail(s, "iff takes two arguments");
      const auto a = args();
      return st.mkIff(a[0], a[1]);
    }
    if (op == "ite") {
      if (n != 3) fail(s, "ite takes three arguments");
      if (sortOf(s.items[2]) != Sort::Bool) fail(s, "only Boolean ite is supported");
      const auto a = args();
      return st.mkOr(st.mkAnd(a[0], a[1]), st.mkAnd(st.mkNot(a[0]), a[2]));
    }
    if (op == "=" && n >= 2 && sortOf(s.items[1]) == Sort::Bool) {
      const auto a = args();
      std::vector<FormulaId> parts;
      for (std::size_t i = 1; i < a.size(); ++i) parts.push_back(st.mkIff(a[i - 1], a[i]));
      return st.mkAnd(parts);
    }
    static const std::map<std::string, Comparison> cmps{{"<=", Comparison::Le}, {"<", Comparison::Lt},
                                                         {"=", Comparison::Eq}, {">=", Comparison::Ge},
                                                         {">", Comparison::Gt}};
    if (auto it = cmps.find(op); it != cmps.end()) {
      if (n < 2) fail(s, op + " takes at least two arguments");
      std::vector<Linear> terms;
      for (std::size_t i = 1; i <= n; ++i) terms.push_back(linear(s.items[i]));
      std::vector<FormulaId> parts;
      for (std::size_t i = 1; i < terms.size(); ++i) {
        Linear diff = terms[i - 1];
        diff.add(terms[i], -1);
        if (diff.isConstant()) fail(s, "comparison without variables is not an atom");
        try {
          parts.push_back(note(ctx_.linear(diff.coeffs, it->second, -diff.constant)));
        } catch (const Error& e) {
          fail(s, e.what());
        }
      }
      return st.mkAnd(parts);
    }
    if (op == "let" || op == "forall" || op == "exists" || op == "!") {
      fail(s.items[0], "'" + op + "' is not supported");
    }
    fail(s.items[0], "unknown Boolean operator '" + op + "'");
  }

  Linear linear(const Sexp& s) {
    Linear out;
    if (!s.isList()) {
      if (s.head.kind == Token::Number) {
        out.constant = parseNumber(s);
        return out;
      }
      auto it = sorts_.find(s.head.text);
      if (it == sorts_.end()) fail(s, "undeclared symbol '" + s.head.text + "'");
      if (it->second != Sort::Real) fail(s, "'" + s.head.text + "' is not Real");
      out.coeffs[s.head.text] = 1;
      return out;
    }
    if (s.items.empty() || s.items[0].head.kind != Token::Symbol) fail(s, "expected an operator");
    const std::string& op = s.items[0].head.text;
    const std::size_t n = s.items.size() - 1;
    if (op == "+") {
      for (std::size_t i = 1; i <= n; ++i) out.add(linear(s.items[i]), 1);
      return out;
    }
    if (op == "-") {
      if (n == 0) fail(s, "- needs an argument");
      out = linear(s.items[1]);
      if (n == 1) {
        out.scale(-1);
        return out;
      }
      for (std::size_t i = 2; i <= n; ++i) out.add(linear(s.items[i]), -1);
      return out;
    }
    if (op == "*") {
      out.constant = 1;
      for (std::size_t i = 1; i <= n; ++i) {
        Linear f = linear(s.items[i]);
        if (!f.isConstant() && !out.isConstant()) fail(s, "non-linear term");
        if (f.isConstant()) {
          out.scale(f.constant);
        } else {
          f.scale(out.constant);
          out = std::move(f);
        }
      }
      return out;
    }
    if (op == "/") {
      if (n != 2) fail(s, "/ takes two arguments");
      out = linear(s.items[1]);
      const Linear d = linear(s.items[2]);
      if (!d.isConstant()) fail(s, "non-linear term");
      if (d.constant == 0) fail(s, "division by zero");
      out.scale(1 / d.constant);
      return out;
    }
    fail(s.items[0], "unsupported arithmetic operator '" + op + "'");
  }

  Context& ctx_;
  std::unordered_map<std::string, Sort> sorts_;
  AtomSet atoms_;
};

std::string rationalTerm(const Rational& q) {
  const Integer num = q.get_num();
  const Integer den = q.get_den();
  std::string n = num < 0 ? "(- " + Integer(-num).get_str() + ")" : num.get_str();
  if (den == 1) return n;
  return "(/ " + n + " " + den.get_str() + ")";
}

}  // namespace

ParsedProblem parseSmt2(Context& ctx, std::string_view text) {
  Parser p(ctx);
  return p.run(text);
}

std::string printSmt2(const Context& ctx, FormulaId f) {
  const FormulaStore& s = ctx.terms();
  std::set<std::string> bools, reals;
  for (std::uint32_t id : s.symbols(f)) {
    const Atom& a = ctx.atom(id);
    if (a.isBoolean()) {
      bools.insert(a.name());
    } else {
      for (const auto& [v, c] : a.coefficients()) reals.insert(v);
    }
  }
  auto quote = [](const std::string& name) {
    const bool plain = !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || std::string_view("_.~!@$%^&*+-/<>=?").find(c) != std::string_view::npos;
    }) && !std::isdigit(static_cast<unsigned char>(name[0]));
    return plain ? name : "|" + name + "|";
  };
  auto atomText = [&](const Atom& a) -> std::string {
    if (a.isBoolean()) return quote(a.name());
    std::vector<std::string> parts;
    for (const auto& [v, c] : a.coefficients()) {
      parts.push_back(c == 1 ? quote(v) : "(* " + rationalTerm(c) + " " + quote(v) + ")");
    }
    const std::string lhs = parts.size() == 1 ? parts[0] : [&] {
      std::string t = "(+";
      for (const auto& p : parts) t += " " + p;
      return t + ")";
    }();
    const char* rel = a.relation() == Relation::Le ? "<=" : a.relation() == Relation::Lt ? "<" : "=";
    return std::string("(") + rel + " " + lhs + " " + rationalTerm(a.constant()) + ")";
  };
  std::function<void(std::ostream&, FormulaId)> term = [&](std::ostream& os, FormulaId g) {
    const FormulaNode& n = s.node(g);
    switch (n.op) {
      case Op::True: os << "true"; return;
      case Op::False: os << "false"; return;
      case Op::Lit:
        if (n.positive) {
          os << atomText(ctx.atom(n.symbol));
        } else {
          os << "(not " << atomText(ctx.atom(n.symbol)) << ")";
        }
        return;
      case Op::Not: os << "(not "; term(os, n.kids[0]); os << ")"; return;
      case Op::And:
      case Op::Or:
      case Op::Iff:
      case Op::Implies: {
        static const char* names[] = {"", "", "", "", "and", "or", "=", "=>"};
        os << "(" << names[static_cast<int>(n.op)];
        for (FormulaId k : n.kids) {
          os << ' ';
          term(os, k);
        }
        os << ")";
        return;
      }
    }
  };
  std::ostringstream os;
  os << "(set-logic QF_LRA)\n";
  for (const auto& r : reals) os << "(declare-fun " << quote(r) << " () Real)\n";
  for (const auto& b : bools) os << "(declare-fun " << quote(b) << " () Bool)\n";
  if (f != s.top()) {
    os << "(assert ";
    term(os, f);
    os << ")\n";
  }
  os << "(check-sat)\n";
  return os.str();
}

}  // namespace tkc
