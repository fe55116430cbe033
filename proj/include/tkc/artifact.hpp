#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "tkc/atom.hpp"
#include "tkc/context.hpp"
#include "tkc/ddnnf.hpp"
#include "tkc/deadline.hpp"
#include "tkc/lemmas.hpp"
#include "tkc/obdd.hpp"

namespace tkc {

enum class Mode : std::uint8_t { TReduced, TExtended };
enum class Target : std::uint8_t { Ddnnf, Obdd };

const char* modeName(Mode mode);
const char* targetName(Target target);

/// Result of a compilation pipeline. The graph is frozen once built and may
/// be shared by several artifacts and read concurrently.
struct CompiledArtifact {
  Mode mode = Mode::TReduced;
  Target target = Target::Ddnnf;
  AtomSet alpha;
  LemmaSet lemmas;

  std::shared_ptr<DdnnfGraph> graph;
  DdnnfRef root;        // as compiled (or smoothed, when `smooth` is set)
  DdnnfRef smoothRoot;  // smoothed and padded to the free variables of alpha
  bool smooth = false;
  bool decisionOnly = true;  // no general Or node below root

  /// Literals fixed by condition(); empty for compiled artifacts.
  LiteralSet conditionedOn;
  bool conditioned() const { return !conditionedOn.empty(); }

  std::shared_ptr<ObddManager> obdd;
  std::optional<ObddRef> obddRoot;

  /// Children-first orders of root and smoothRoot, cached for the queries.
  std::vector<DdnnfRef> rootOrder;
  std::vector<DdnnfRef> smoothOrder;

  double enumerateMs = 0;
  double compileMs = 0;

  std::size_t dagSize() const { return rootOrder.size(); }
};

struct BuildOptions {
  LemmaScope scope = LemmaScope::Formula;
  unsigned jobs = 1;
  bool smooth = false;
  bool componentCache = true;
  /// Wall-clock budgets per phase in seconds, each started when its phase
  /// starts; 0 means unlimited. Expiry raises TimeoutError naming the phase.
  double enumerateSeconds = 0;
  double compileSeconds = 0;
  /// OBDD target: manager to build in (created from `order` when null).
  std::shared_ptr<ObddManager> manager;
  /// OBDD variable order; defaults to 1..|alpha|.
  std::vector<Var> order;
};

/// phi & (conjunction of lemmas ruling out ITTA(phi)), compiled.
CompiledArtifact buildTred(Context& ctx, FormulaId phi, const AtomSet& alpha,
                           const BuildOptions& options = {});
/// phi | !(conjunction of lemmas ruling out ITTA(!phi)), compiled.
CompiledArtifact buildText(Context& ctx, FormulaId phi, const AtomSet& alpha,
                           const BuildOptions& options = {});
CompiledArtifact build(Context& ctx, FormulaId phi, const AtomSet& alpha, Mode mode,
                       Target target, const BuildOptions& options = {});
CompiledArtifact buildObddArtifact(Context& ctx, FormulaId phi, const AtomSet& alpha, Mode mode,
                                   const BuildOptions& options = {});

/// The propositional formula that gets compiled: phi with the lemmas added.
FormulaId augmentedFormula(Context& ctx, FormulaId phiAbstraction, const LemmaSet& lemmas,
                           Mode mode);

/// Wraps an existing DAG into an artifact: computes the smoothed root and the
/// cached traversal orders.
CompiledArtifact makeArtifact(Mode mode, Target target, AtomSet alpha, LemmaSet lemmas,
                              std::shared_ptr<DdnnfGraph> graph, DdnnfRef root,
                              LiteralSet conditionedOn = {});

/// The artifact's DAG as a T-formula of the context.
FormulaId refineArtifact(Context& ctx, const CompiledArtifact& artifact);

}  // namespace tkc
