#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace tkc {

/// Propositional variable index under an abstraction: 1-based and dense.
using Var = std::uint32_t;

/// A signed reference to an atom of an AtomSet (variable index + polarity).
struct Literal {
  Var var = 0;
  bool positive = true;

  constexpr Literal() = default;
  constexpr Literal(Var v, bool pos) : var(v), positive(pos) {}

  static Literal fromSigned(int s) { return {static_cast<Var>(std::abs(s)), s > 0}; }
  int toSigned() const { return positive ? static_cast<int>(var) : -static_cast<int>(var); }

  Literal operator~() const { return {var, !positive}; }

  /// Canonical order: by variable, then negative before positive.
  friend constexpr auto operator<=>(const Literal& a, const Literal& b) {
    if (auto c = a.var <=> b.var; c != 0) return c;
    return static_cast<int>(a.positive) <=> static_cast<int>(b.positive);
  }
  friend constexpr bool operator==(const Literal&, const Literal&) = default;
};

/// Conjunction of literals (cube) or disjunction (clause); the role is contextual.
using LiteralSet = std::vector<Literal>;

/// Sorts, removes duplicates, and reports whether the set mentions both polarities of a variable.
bool canonicalize(LiteralSet& lits);

std::string formatLiterals(std::span<const Literal> lits);

}  // namespace tkc

template <>
struct std::hash<tkc::Literal> {
  std::size_t operator()(const tkc::Literal& l) const noexcept {
    return std::hash<int>{}(l.toSigned());
  }
};
