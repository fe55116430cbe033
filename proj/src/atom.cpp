#include "tkc/atom.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "tkc/errors.hpp"

namespace tkc {

namespace {

std::string stripSpaces(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

std::string describe(const std::map<std::string, Rational>& terms, Comparison cmp,
                     const Rational& constant) {
  static const char* ops[] = {"<=", "<", "=", ">=", ">"};
  std::ostringstream os;
  bool first = true;
  for (const auto& [var, c] : terms) {
    if (!first) os << " + ";
    os << c.get_str() << "*" << var;
    first = false;
  }
  if (first) os << "0";
  os << " " << ops[static_cast<int>(cmp)] << " " << constant.get_str();
  return os.str();
}

}  // namespace

std::string relationName(Relation rel) {
  switch (rel) {
    case Relation::Le:
      return "<=";
    case Relation::Lt:
      return "<";
    case Relation::Eq:
      return "=";
  }
  return "?";
}

Atom Atom::boolean(std::string name) {
  if (name.empty()) throw Error("empty Boolean atom name");
  Atom a;
  a.kind_ = Kind::Boolean;
  a.name_ = std::move(name);
  a.render();
  return a;
}

std::pair<Atom, bool> Atom::linear(std::map<std::string, Rational> terms, Comparison cmp,
                                   Rational constant) {
  const std::string original = describe(terms, cmp, constant);
  std::erase_if(terms, [](const auto& kv) { return sgn(kv.second) == 0; });
  if (terms.empty()) throw Error("degenerate arithmetic atom (no variables): " + original);

  // Scale to coprime integer coefficients with a positive factor.
  Integer den = 1;
  for (const auto& [var, c] : terms) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  Integer g = 0;
  for (const auto& [var, c] : terms) {
    Rational scaled = c * den;
    Integer num = scaled.get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
  }
  const Rational scale(den, g);

  Relation rel = Relation::Le;
  bool negateTerm = false;
  switch (cmp) {
    case Comparison::Le: rel = Relation::Le; break;
    case Comparison::Lt: rel = Relation::Lt; break;
    case Comparison::Eq: rel = Relation::Eq; break;
    case Comparison::Ge: rel = Relation::Le; negateTerm = true; break;
    case Comparison::Gt: rel = Relation::Lt; negateTerm = true; break;
  }
  Rational factor = negateTerm ? Rational(-scale) : scale;

  bool positive = true;
  if (sgn(terms.begin()->second * factor) < 0) {
    factor = -factor;
    if (rel == Relation::Le) {
      rel = Relation::Lt;
      positive = false;
    } else if (rel == Relation::Lt) {
      rel = Relation::Le;
      positive = false;
    }
  }

  Atom a;
  a.kind_ = Kind::Linear;
  a.rel_ = rel;
  for (const auto& [var, c] : terms) {
    Rational v = c * factor;
    v.canonicalize();
    a.coeffs_.emplace_back(var, v);
  }
  a.constant_ = constant * factor;
  a.constant_.canonicalize();
  a.render();
  return {std::move(a), positive};
}

std::string Atom::termString() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [var, c] : coeffs_) {
    Rational mag = abs(c);
    if (first) {
      if (sgn(c) < 0) os << "-";
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    if (mag != 1) os << mag.get_str() << "*";
    os << var;
    first = false;
  }
  return os.str();
}

void Atom::render() {
  if (kind_ == Kind::Boolean) {
    text_ = name_;
    return;
  }
  text_ = termString() + " " + relationName(rel_) + " " + constant_.get_str();
}

std::string Atom::key() const { return (isBoolean() ? "b:" : "l:") + text_; }

bool Atom::holdsAt(const Point& point) const {
  if (isBoolean()) throw Error("holdsAt on Boolean atom " + name_);
  Rational lhs = 0;
  for (const auto& [var, c] : coeffs_) {
    auto it = point.find(var);
    if (it == point.end()) throw Error("variable " + var + " unbound in point");
    lhs += c * it->second;
  }
  switch (rel_) {
    case Relation::Le: return lhs <= constant_;
    case Relation::Lt: return lhs < constant_;
    case Relation::Eq: return lhs == constant_;
  }
  return false;
}

AtomId AtomTable::intern(const Atom& atom) {
  auto [it, inserted] = index_.try_emplace(atom.key(), static_cast<AtomId>(atoms_.size()));
  if (inserted) atoms_.push_back(atom);
  return it->second;
}

std::optional<AtomId> AtomTable::find(const Atom& atom) const {
  auto it = index_.find(atom.key());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

AtomSet::AtomSet(const std::vector<Atom>& atoms) {
  for (const auto& a : atoms) add(a);
}

Var AtomSet::add(const Atom& atom) {
  const auto index = static_cast<Var>(atoms_.size() + 1);
  if (!index_.try_emplace(atom.key(), index).second) {
    throw Error("duplicate atom in atom set: " + atom.str());
  }
  byText_.try_emplace(stripSpaces(atom.str()), index);
  atoms_.push_back(atom);
  return index;
}

std::optional<Var> AtomSet::indexOf(const Atom& atom) const {
  auto it = index_.find(atom.key());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Var> AtomSet::findByText(std::string_view text) const {
  auto it = byText_.find(stripSpaces(text));
  if (it == byText_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> AtomSet::variables() const {
  std::vector<std::string> vars;
  for (const auto& a : atoms_) {
    for (const auto& [v, c] : a.coefficients()) vars.push_back(v);
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

std::string AtomSet::literalString(Literal lit) const {
  return (lit.positive ? "" : "!") + at(lit.var).str();
}

LiteralSet parseLiteralList(const AtomSet& alpha, std::string_view text) {
  LiteralSet lits;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string item = stripSpaces(text.substr(start, comma - start));
    start = comma + 1;
    if (item.empty()) {
      if (comma == text.size()) break;
      continue;
    }
    bool positive = true;
    if (item.front() == '!') {
      positive = false;
      item.erase(item.begin());
    }
    auto var = alpha.findByText(item);
    if (!var) throw Error("literal does not name an atom of the map: " + item);
    lits.emplace_back(*var, positive);
  }
  return lits;
}

bool canonicalize(LiteralSet& lits) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (std::size_t i = 1; i < lits.size(); ++i) {
    if (lits[i].var == lits[i - 1].var) return false;
  }
  return true;
}

std::string formatLiterals(std::span<const Literal> lits) {
  std::ostringstream os;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i) os << ' ';
    os << lits[i].toSigned();
  }
  return os.str();
}

}  // namespace tkc
