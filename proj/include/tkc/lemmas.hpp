#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tkc/atom.hpp"
#include "tkc/context.hpp"
#include "tkc/deadline.hpp"
#include "tkc/formula.hpp"
#include "tkc/literal.hpp"

namespace tkc {

/// A T-valid clause over the variables of an atom set, literals sorted.
struct TLemma {
  LiteralSet literals;
  friend auto operator<=>(const TLemma&, const TLemma&) = default;
};

enum class LemmaScope : std::uint8_t { Formula, Top };
enum class LemmaTarget : std::uint8_t { ForFormula, ForNegation, ForTop };

/// Lemmas ruling out the T-inconsistent total assignments of a target formula.
struct LemmaSet {
  std::vector<TLemma> lemmas;  // sorted, duplicate-free
  LemmaTarget target = LemmaTarget::ForFormula;
  AtomSet alpha;

  std::size_t size() const { return lemmas.size(); }
};

struct EnumerationOptions {
  LemmaScope scope = LemmaScope::Formula;
  unsigned jobs = 1;
  const Deadline* deadline = nullptr;
};

struct EnumerationStats {
  std::size_t theoryChecks = 0;
  std::size_t searchNodes = 0;
};

/// Enumerates T-lemmas ruling out ITTA_alpha(target), where target is the
/// propositional formula `formula` (in `store`, over the variables of alpha)
/// or T when scope = Top.
///
/// DPLL-style search in ascending variable order, true first. Every branch is
/// theory-checked incrementally; a conflict is minimized and its negation is
/// learned as a lemma, which also blocks later branches. Boolean atoms that
/// no longer occur in the residual are not branched on.
LemmaSet enumerateLemmas(const FormulaStore& store, FormulaId formula, const AtomSet& alpha,
                         const EnumerationOptions& options = {},
                         EnumerationStats* stats = nullptr);

/// Convenience overload on a T-formula of the context.
LemmaSet enumerateLemmas(Context& ctx, FormulaId formula, const AtomSet& alpha,
                         const EnumerationOptions& options = {});

/// True iff every assignment in `assignments` falsifies some lemma. Each
/// assignment must be total over lemmas.alpha (throws Error otherwise).
bool rulesOut(const LemmaSet& lemmas, std::span<const LiteralSet> assignments);

/// Checks that every lemma is a T-valid clause without duplicate or
/// complementary literals.
bool lemmasAreValid(const LemmaSet& lemmas);

}  // namespace tkc
