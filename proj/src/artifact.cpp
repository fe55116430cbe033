#include "tkc/artifact.hpp"

#include <chrono>

#include "tkc/errors.hpp"

namespace tkc {

namespace {

double msSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

CompiledArtifact pipeline(Context& ctx, FormulaId phi, const AtomSet& alpha, Mode mode,
                          Target target, const BuildOptions& options) {
  FormulaStore& prop = ctx.prop();
  const Abstraction abs = abstract(ctx, phi, alpha);
  const FormulaId nnf = prop.toNnf(abs.formula);

  auto budget = [](double seconds) {
    return seconds > 0 ? std::optional<Deadline>(Deadline::afterSeconds(seconds)) : std::nullopt;
  };
  auto t0 = std::chrono::steady_clock::now();
  const std::optional<Deadline> enumDeadline = budget(options.enumerateSeconds);
  EnumerationOptions eo{options.scope, options.jobs, enumDeadline ? &*enumDeadline : nullptr};
  LemmaSet lemmas;
  if (mode == Mode::TReduced) {
    lemmas = enumerateLemmas(prop, nnf, alpha, eo);
  } else {
    lemmas = enumerateLemmas(prop, prop.negate(nnf), alpha, eo);
    if (options.scope == LemmaScope::Formula) lemmas.target = LemmaTarget::ForNegation;
  }
  const double enumerateMs = msSince(t0);

  t0 = std::chrono::steady_clock::now();
  const std::optional<Deadline> compDeadline = budget(options.compileSeconds);
  const Deadline* compileDeadline = compDeadline ? &*compDeadline : nullptr;
  const FormulaId augmented = augmentedFormula(ctx, nnf, lemmas, mode);
  auto graph = std::make_shared<DdnnfGraph>();
  DdnnfRef root;
  std::shared_ptr<ObddManager> manager;
  std::optional<ObddRef> obddRoot;
  if (target == Target::Ddnnf) {
    root = compileDdnnf(*graph, prop, augmented,
                        CompileOptions{options.componentCache, compileDeadline});
  } else {
    manager = options.manager;
    if (!manager) {
      std::vector<Var> order = options.order;
      if (order.empty()) {
        for (Var v = 1; v <= alpha.size(); ++v) order.push_back(v);
      }
      manager = std::make_shared<ObddManager>(std::move(order));
    }
    checkDeadline(compileDeadline, "compilation");
    obddRoot = manager->fromFormula(prop, augmented);
    checkDeadline(compileDeadline, "compilation");
    root = manager->toDdnnf(*obddRoot, *graph);
  }
  if (options.smooth) root = smooth(*graph, root, alpha.size());
  const double compileMs = msSince(t0);

  CompiledArtifact a = makeArtifact(mode, target, alpha, std::move(lemmas), graph, root);
  a.smooth = options.smooth;
  a.obdd = std::move(manager);
  a.obddRoot = obddRoot;
  a.enumerateMs = enumerateMs;
  a.compileMs = compileMs;
  return a;
}

}  // namespace

const char* modeName(Mode mode) { return mode == Mode::TReduced ? "tReduced" : "tExtended"; }
const char* targetName(Target target) { return target == Target::Ddnnf ? "ddnnf" : "obdd"; }

FormulaId augmentedFormula(Context& ctx, FormulaId phi, const LemmaSet& lemmas, Mode mode) {
  FormulaStore& prop = ctx.prop();
  std::vector<FormulaId> parts;
  parts.reserve(lemmas.size());
  for (const TLemma& c : lemmas.lemmas) {
    std::vector<FormulaId> lits;
    for (Literal l : c.literals) {
      // clause for the reduced form, the negated clause (a cube) for the extended one
      lits.push_back(prop.literal(l.var, mode == Mode::TReduced ? l.positive : !l.positive));
    }
    parts.push_back(mode == Mode::TReduced ? prop.mkOr(lits) : prop.mkAnd(lits));
  }
  if (mode == Mode::TReduced) return prop.mkAnd(phi, prop.mkAnd(parts));
  return prop.mkOr(phi, prop.mkOr(parts));
}

CompiledArtifact buildTred(Context& ctx, FormulaId phi, const AtomSet& alpha,
                           const BuildOptions& options) {
  return pipeline(ctx, phi, alpha, Mode::TReduced, Target::Ddnnf, options);
}

CompiledArtifact buildText(Context& ctx, FormulaId phi, const AtomSet& alpha,
                           const BuildOptions& options) {
  return pipeline(ctx, phi, alpha, Mode::TExtended, Target::Ddnnf, options);
}

CompiledArtifact build(Context& ctx, FormulaId phi, const AtomSet& alpha, Mode mode,
                       Target target, const BuildOptions& options) {
  return pipeline(ctx, phi, alpha, mode, target, options);
}

CompiledArtifact buildObddArtifact(Context& ctx, FormulaId phi, const AtomSet& alpha, Mode mode,
                                   const BuildOptions& options) {
  return pipeline(ctx, phi, alpha, mode, Target::Obdd, options);
}

CompiledArtifact makeArtifact(Mode mode, Target target, AtomSet alpha, LemmaSet lemmas,
                              std::shared_ptr<DdnnfGraph> graph, DdnnfRef root,
                              LiteralSet conditionedOn) {
  CompiledArtifact a;
  a.mode = mode;
  a.target = target;
  a.lemmas = std::move(lemmas);
  a.graph = std::move(graph);
  a.root = root;
  a.conditionedOn = std::move(conditionedOn);
  a.rootOrder = a.graph->reachable(root);
  for (DdnnfRef r : a.rootOrder) {
    const DdnnfNode& n = a.graph->node(r);
    if (n.kind == DKind::Or) a.decisionOnly = false;
    for (Var v : n.support) {
      if (v == 0 || v > alpha.size()) {
        throw Error("compiled DAG mentions variable " + std::to_string(v) +
                    " outside the atom set");
      }
    }
  }
  std::vector<Var> free;
  std::vector<char> fixed(alpha.size() + 1, 0);
  for (Literal l : a.conditionedOn) fixed[l.var] = 1;
  for (Var v = 1; v <= alpha.size(); ++v) {
    if (!fixed[v]) free.push_back(v);
  }
  a.alpha = std::move(alpha);
  a.smoothRoot = a.decisionOnly ? smooth(*a.graph, root, free) : root;
  a.smoothOrder = a.graph->reachable(a.smoothRoot);
  return a;
}

FormulaId refineArtifact(Context& ctx, const CompiledArtifact& artifact) {
  const AbstractionMap map = makeAbstractionMap(ctx, artifact.alpha);
  FormulaStore& terms = ctx.terms();
  const DdnnfGraph& g = *artifact.graph;
  std::unordered_map<std::uint32_t, FormulaId> memo;
  for (DdnnfRef r : artifact.rootOrder) {
    const DdnnfNode& n = g.node(r);
    FormulaId out;
    switch (n.kind) {
      case DKind::True: out = terms.top(); break;
      case DKind::False: out = terms.bottom(); break;
      case DKind::Lit: out = terms.literal(map.atomOfVar[n.var], n.positive); break;
      case DKind::And:
      case DKind::Or: {
        std::vector<FormulaId> kids;
        for (DdnnfRef k : n.kids) kids.push_back(memo.at(k.index));
        out = n.kind == DKind::And ? terms.mkAnd(kids) : terms.mkOr(kids);
        break;
      }
      case DKind::Decision: {
        const AtomId atom = map.atomOfVar[n.var];
        out = terms.mkOr(terms.mkAnd(terms.literal(atom, true), memo.at(n.kids[0].index)),
                         terms.mkAnd(terms.literal(atom, false), memo.at(n.kids[1].index)));
        break;
      }
    }
    memo[r.index] = out;
  }
  return memo.at(artifact.root.index);
}

}  // namespace tkc
