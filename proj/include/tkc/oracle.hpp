#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "tkc/artifact.hpp"
#include "tkc/context.hpp"
#include "tkc/deadline.hpp"

namespace tkc {

/// Total assignment over variables 1..n: bit (v-1) holds the value of v.
using Mask = std::uint64_t;

LiteralSet maskToCube(Mask mask, std::size_t n);
Mask cubeToMask(std::span<const Literal> cube);
/// Lexicographic order in variable index with true before false.
bool lexLess(Mask a, Mask b, std::size_t n);

struct AssignmentSets {
  std::vector<Mask> ctta;  // ascending masks
  std::vector<Mask> itta;
  std::size_t atoms = 0;
};

/// Evaluates a propositional formula on masks by a flat bottom-up pass.
class MaskEvaluator {
 public:
  MaskEvaluator(const FormulaStore& store, FormulaId root);
  bool operator()(Mask mask) const;

 private:
  struct Step {
    Op op;
    std::uint32_t symbol;
    bool positive;
    std::vector<std::uint32_t> kids;  // slots
  };
  std::vector<Step> steps_;
  mutable std::vector<char> slot_;
};

/// Exhaustive reference semantics over a fixed atom set. Refuses atom sets
/// larger than the bound. Not thread-safe (the theory memo is shared).
class Oracle {
 public:
  explicit Oracle(AtomSet alpha, std::size_t bound = 16);

  const AtomSet& alpha() const { return alpha_; }
  std::size_t size() const { return alpha_.size(); }

  /// T-consistency of a total assignment, memoized on its arithmetic part.
  bool consistent(Mask total) const;

  AssignmentSets classify(const std::function<bool(Mask)>& satisfies) const;
  AssignmentSets cttaItta(Context& ctx, FormulaId phi) const;
  AssignmentSets cttaItta(const CompiledArtifact& artifact) const;
  /// CTTA of T over alpha.
  std::vector<Mask> consistentTotals() const;

  std::function<bool(Mask)> predicate(Context& ctx, FormulaId phi) const;

  bool co(Context& ctx, FormulaId phi) const;
  bool va(Context& ctx, FormulaId phi) const;
  bool ce(Context& ctx, FormulaId phi, std::span<const Literal> clause) const;
  bool im(Context& ctx, FormulaId phi, std::span<const Literal> cube) const;
  Integer ct(Context& ctx, FormulaId phi) const;
  Integer ctAssume(Context& ctx, FormulaId phi, std::span<const Literal> cube) const;
  /// CTTA in lexicographic order, true before false.
  std::vector<LiteralSet> me(Context& ctx, FormulaId phi) const;
  bool eq(Context& ctx, FormulaId a, FormulaId b) const;
  bool se(Context& ctx, FormulaId a, FormulaId b) const;

  bool checkTreduced(Context& ctx, FormulaId phi) const;
  bool checkTextended(Context& ctx, FormulaId phi) const;
  bool checkTreduced(const std::function<bool(Mask)>& satisfies) const;
  bool checkTextended(const std::function<bool(Mask)>& satisfies) const;

  std::size_t theoryChecks() const { return checks_; }

 private:
  AtomSet alpha_;
  Mask linearMask_ = 0;
  Mask fullMask_ = 0;
  mutable std::unordered_map<Mask, bool> memo_;
  mutable std::size_t checks_ = 0;
};

struct BaselineStats {
  std::size_t theoryChecks = 0;
  std::size_t nodes = 0;
};

/// #SMT(phi & cube) the AllSMT way: every total T-consistent model over alpha
/// is enumerated and counted, with partial-assignment theory pruning and no
/// reuse between calls. Throws TimeoutError when the deadline expires.
Integer allSmtCount(const FormulaStore& prop, FormulaId phi, const AtomSet& alpha,
                    std::span<const Literal> cube, const Deadline* deadline = nullptr,
                    BaselineStats* stats = nullptr);

}  // namespace tkc
