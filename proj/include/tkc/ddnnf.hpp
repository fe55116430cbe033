#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tkc/deadline.hpp"
#include "tkc/formula.hpp"
#include "tkc/literal.hpp"

namespace tkc {

struct DdnnfRef {
  std::uint32_t index = 0;
  friend constexpr auto operator<=>(const DdnnfRef&, const DdnnfRef&) = default;
};

/// Or is a general disjunction, only produced when reading foreign NNF files.
/// Decision(v, hi, lo) stands for (v & hi) | (!v & lo).
enum class DKind : std::uint8_t { True, False, Lit, And, Or, Decision };

struct DdnnfNode {
  DKind kind = DKind::True;
  Var var = 0;           // Lit, Decision
  bool positive = true;  // Lit
  std::vector<DdnnfRef> kids;  // Decision: {hi, lo}
  std::vector<Var> support;    // sorted
};

/// Hash-consed NNF arena. Constructors do not simplify; children always have
/// smaller indices than their parents.
class DdnnfGraph {
 public:
  DdnnfGraph();

  DdnnfRef top() const { return DdnnfRef{0}; }
  DdnnfRef bottom() const { return DdnnfRef{1}; }
  DdnnfRef literal(Var var, bool positive);
  DdnnfRef conjoin(std::vector<DdnnfRef> kids);
  DdnnfRef disjoin(std::vector<DdnnfRef> kids);
  DdnnfRef decision(Var var, DdnnfRef hi, DdnnfRef lo);

  const DdnnfNode& node(DdnnfRef r) const { return nodes_[r.index]; }
  std::span<const Var> support(DdnnfRef r) const { return nodes_[r.index].support; }
  std::size_t size() const { return nodes_.size(); }

  /// Nodes reachable from root, children before parents.
  std::vector<DdnnfRef> reachable(DdnnfRef root) const;
  std::size_t dagSize(DdnnfRef root) const { return reachable(root).size(); }

  /// Copies a sub-DAG of another graph into this one.
  DdnnfRef import(const DdnnfGraph& from, DdnnfRef root);

 private:
  struct Key {
    DKind kind;
    Var var;
    bool positive;
    std::vector<DdnnfRef> kids;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };
  DdnnfRef make(DKind kind, Var var, bool positive, std::vector<DdnnfRef> kids);

  std::vector<DdnnfNode> nodes_;
  std::unordered_map<Key, DdnnfRef, KeyHash> unique_;
};

/// Evaluates a fixed root on many total assignments.
class DdnnfEvaluator {
 public:
  DdnnfEvaluator(const DdnnfGraph& graph, DdnnfRef root);
  /// `value(v)` gives the truth value of variable v.
  bool operator()(const std::function<bool(Var)>& value) const;
  /// Assignment as a bit mask: bit (v-1) is the value of v.
  bool evaluateMask(std::uint64_t mask) const;

 private:
  const DdnnfGraph& graph_;
  std::vector<DdnnfRef> order_;
  mutable std::vector<char> memo_;
};

struct ValidationReport {
  bool decomposable = true;
  bool deterministic = true;
  bool smooth = true;
  std::string firstViolation;
};

/// Structural checks. Determinism is certified by the decision-node
/// discipline: a general Or node is reported as non-deterministic. When
/// `alphaSize` is given, smoothness also requires the root to mention every
/// variable 1..alphaSize (a constant-false root is exempt).
ValidationReport validate(const DdnnfGraph& graph, DdnnfRef root,
                          std::optional<std::size_t> alphaSize = std::nullopt);

/// Smooths a decomposable, decision-deterministic DAG and pads the root so it
/// mentions every variable 1..alphaSize. Missing variables are added as
/// Decision(u, T, T) gadgets, i.e. (u | !u).
DdnnfRef smooth(DdnnfGraph& graph, DdnnfRef root, std::size_t alphaSize);
/// Same, padding the root to `cover` (sorted) instead of 1..alphaSize.
DdnnfRef smooth(DdnnfGraph& graph, DdnnfRef root, std::span<const Var> cover);

/// Connected components of the conjuncts of `residual` under shared
/// variables; a non-conjunction is a single component.
std::vector<FormulaId> partition(FormulaStore& store, FormulaId residual);

/// Most frequent variable of a non-constant residual (ties to the lowest
/// index), positive polarity first. Throws Error on constants.
Literal selectLiteral(const FormulaStore& store, FormulaId residual);

struct CompileOptions {
  bool componentCache = true;
  const Deadline* deadline = nullptr;
};

struct CompileStats {
  std::size_t calls = 0;
  std::size_t cacheHits = 0;
  std::size_t decisions = 0;
};

/// Compiles a propositional NNF formula into a decision-DNNF inside `out`.
/// Throws Error if the input is not in NNF.
DdnnfRef compileDdnnf(DdnnfGraph& out, const FormulaStore& store, FormulaId nnf,
                      const CompileOptions& options = {}, CompileStats* stats = nullptr);

/// Same shape and labels, node by node.
bool structurallyEqual(const DdnnfGraph& a, DdnnfRef ra, const DdnnfGraph& b, DdnnfRef rb);

}  // namespace tkc

template <>
struct std::hash<tkc::DdnnfRef> {
  std::size_t operator()(const tkc::DdnnfRef& r) const noexcept {
    return std::hash<std::uint32_t>{}(r.index);
  }
};
