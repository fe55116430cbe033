#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tkc/literal.hpp"

namespace tkc {

using Rational = mpq_class;
using Integer = mpz_class;

/// Relations kept in normal form. Comparisons with >= and > are folded into
/// negated literals of < and <=.
enum class Relation : std::uint8_t { Le, Lt, Eq };

/// Input-side comparison operators, before normalization.
enum class Comparison : std::uint8_t { Le, Lt, Eq, Ge, Gt };

using Point = std::map<std::string, Rational>;

/// A Boolean proposition or a linear constraint `sum(c_i * x_i) REL k`.
///
/// Arithmetic atoms are canonical: coefficients are coprime integers, the
/// coefficient of the lexicographically first variable is positive and the
/// relation is one of <=, <, =. Two atoms are equal iff their keys are equal.
class Atom {
 public:
  enum class Kind : std::uint8_t { Boolean, Linear };

  static Atom boolean(std::string name);

  /// Normalizes `terms CMP constant`. Returns the atom together with the
  /// polarity of the literal that denotes the input constraint; e.g. x >= 1
  /// yields (atom `x < 1`, false). Throws Error on constraints with no
  /// variables (they would be T-valid or T-inconsistent).
  static std::pair<Atom, bool> linear(std::map<std::string, Rational> terms, Comparison cmp,
                                      Rational constant);

  Kind kind() const { return kind_; }
  bool isBoolean() const { return kind_ == Kind::Boolean; }
  bool isLinear() const { return kind_ == Kind::Linear; }

  const std::string& name() const { return name_; }
  const std::vector<std::pair<std::string, Rational>>& coefficients() const { return coeffs_; }
  Relation relation() const { return rel_; }
  const Rational& constant() const { return constant_; }

  /// Printed normal form, e.g. `x - y <= 3` or `b`.
  const std::string& str() const { return text_; }
  /// Printed form of the left-hand side only.
  std::string termString() const;
  /// Unique key (distinguishes a Boolean `b` from any arithmetic text).
  std::string key() const;

  /// Exact evaluation at a point; every variable of the atom must be bound.
  bool holdsAt(const Point& point) const;

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.kind_ == b.kind_ && a.text_ == b.text_;
  }

 private:
  Atom() = default;
  void render();

  Kind kind_ = Kind::Boolean;
  std::string name_;
  std::vector<std::pair<std::string, Rational>> coeffs_;
  Relation rel_ = Relation::Le;
  Rational constant_;
  std::string text_;
};

std::string relationName(Relation rel);

using AtomId = std::uint32_t;

/// Interns atoms; ids are handed out in first-construction order.
class AtomTable {
 public:
  AtomId intern(const Atom& atom);
  std::optional<AtomId> find(const Atom& atom) const;
  const Atom& at(AtomId id) const { return atoms_.at(id); }
  std::size_t size() const { return atoms_.size(); }

 private:
  std::vector<Atom> atoms_;
  std::unordered_map<std::string, AtomId> index_;
};

/// Ordered, duplicate-free set of atoms. The 1-based position of an atom is
/// its propositional variable under abstraction.
class AtomSet {
 public:
  AtomSet() = default;
  explicit AtomSet(const std::vector<Atom>& atoms);

  /// Appends an atom; throws Error if already present.
  Var add(const Atom& atom);

  std::optional<Var> indexOf(const Atom& atom) const;
  /// Whitespace-insensitive lookup by printed form.
  std::optional<Var> findByText(std::string_view text) const;

  const Atom& at(Var index) const { return atoms_.at(index - 1); }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  const std::vector<Atom>& atoms() const { return atoms_; }
  auto begin() const { return atoms_.begin(); }
  auto end() const { return atoms_.end(); }

  /// Sorted names of the arithmetic variables mentioned by the set.
  std::vector<std::string> variables() const;

  std::string literalString(Literal lit) const;

  friend bool operator==(const AtomSet& a, const AtomSet& b) { return a.atoms_ == b.atoms_; }

 private:
  std::vector<Atom> atoms_;
  std::unordered_map<std::string, Var> index_;
  std::unordered_map<std::string, Var> byText_;
};

/// Parses `LIT,LIT,...` where LIT is an atom's printed form with optional `!`.
/// Throws Error when a literal does not name an atom of the set.
LiteralSet parseLiteralList(const AtomSet& alpha, std::string_view text);

}  // namespace tkc
