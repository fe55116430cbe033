#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

namespace tkc {

/// Handle into a FormulaStore. Equal handles denote structurally identical DAGs.
struct FormulaId {
  std::uint32_t index = 0;
  friend constexpr auto operator<=>(const FormulaId&, const FormulaId&) = default;
};

enum class Op : std::uint8_t { True, False, Lit, Not, And, Or, Iff, Implies };

struct FormulaNode {
  Op op = Op::True;
  std::uint32_t symbol = 0;  // Lit only
  bool positive = true;      // Lit only
  std::vector<FormulaId> kids;
  std::vector<std::uint32_t> support;  // sorted symbols reachable from this node
};

/// Partial valuation of symbols used by residual().
using Valuation = std::unordered_map<std::uint32_t, bool>;

/// Hash-consed Boolean DAG over integer symbols.
///
/// The same class stores T-formulas (symbol = AtomId) and their propositional
/// abstractions (symbol = variable index). Constructors fold the constants
/// (psi & T => psi, psi | F => psi, psi & F => F, psi | T => T), flatten nested
/// and/or nodes, and push negation into literals and constants.
///
/// Construction is single-writer; const member functions are safe to call
/// concurrently on a store that is no longer being extended.
class FormulaStore {
 public:
  FormulaStore();

  FormulaId top() const { return FormulaId{0}; }
  FormulaId bottom() const { return FormulaId{1}; }

  FormulaId literal(std::uint32_t symbol, bool positive);
  FormulaId mkNot(FormulaId f);
  FormulaId mkAnd(std::span<const FormulaId> kids);
  FormulaId mkOr(std::span<const FormulaId> kids);
  FormulaId mkAnd(FormulaId a, FormulaId b);
  FormulaId mkOr(FormulaId a, FormulaId b);
  FormulaId mkIff(FormulaId a, FormulaId b);
  FormulaId mkImplies(FormulaId a, FormulaId b);

  const FormulaNode& node(FormulaId f) const { return nodes_[f.index]; }
  Op op(FormulaId f) const { return nodes_[f.index].op; }
  std::size_t size() const { return nodes_.size(); }

  /// Symbols occurring in f, sorted ascending.
  std::span<const std::uint32_t> symbols(FormulaId f) const { return nodes_[f.index].support; }
  bool mentions(FormulaId f, std::uint32_t symbol) const;

  bool isNnf(FormulaId f) const;
  /// NNF with only and/or internal nodes; iff and implies are expanded.
  FormulaId toNnf(FormulaId f);
  /// NNF of the negation of f.
  FormulaId negate(FormulaId f);

  /// Substitutes the valuation and propagates constants.
  FormulaId residual(FormulaId f, const Valuation& valuation);
  FormulaId residual(FormulaId f, std::uint32_t symbol, bool value);

  /// Copies `f` from another store, renaming symbols through `rename`.
  FormulaId import(const FormulaStore& from, FormulaId f,
                   const std::function<std::uint32_t(std::uint32_t)>& rename);

  /// Number of distinct nodes reachable from f.
  std::size_t dagSize(FormulaId f) const;

  /// Evaluates f under a total valuation given as a predicate on symbols.
  bool evaluate(FormulaId f, const std::function<bool(std::uint32_t)>& value) const;

 private:
  struct Key {
    Op op;
    std::uint32_t symbol;
    bool positive;
    std::vector<FormulaId> kids;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  FormulaId make(Op op, std::uint32_t symbol, bool positive, std::vector<FormulaId> kids);
  FormulaId mkNary(Op op, std::span<const FormulaId> kids);
  FormulaId nnf(FormulaId f, bool positive,
                std::unordered_map<std::uint64_t, FormulaId>& memo);
  template <class Lookup>
  FormulaId residualImpl(FormulaId f, const Lookup& lookup,
                         std::unordered_map<std::uint32_t, FormulaId>& memo);

  std::vector<FormulaNode> nodes_;
  std::unordered_map<Key, FormulaId, KeyHash> unique_;
};

}  // namespace tkc

template <>
struct std::hash<tkc::FormulaId> {
  std::size_t operator()(const tkc::FormulaId& f) const noexcept {
    return std::hash<std::uint32_t>{}(f.index);
  }
};
