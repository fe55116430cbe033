#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "tkc/artifact.hpp"

namespace tkc {

/// Nodes visited by a query, for the linear-cost checks.
struct QueryStats {
  std::size_t visits = 0;
};

/// CO. T-reduced artifacts only.
bool isConsistent(const CompiledArtifact& a, QueryStats* stats = nullptr);
/// VA. T-extended artifacts only.
bool isValid(const CompiledArtifact& a, QueryStats* stats = nullptr);
/// CE: does the artifact T-entail the clause? T-reduced only.
bool entailsClause(const CompiledArtifact& a, std::span<const Literal> clause,
                   QueryStats* stats = nullptr);
/// IM: does the cube T-entail the artifact? T-extended only.
bool isImplicant(const CompiledArtifact& a, std::span<const Literal> cube,
                 QueryStats* stats = nullptr);
/// CT over the free variables of alpha. T-reduced only.
Integer countModels(const CompiledArtifact& a, QueryStats* stats = nullptr);
/// Number of models over alpha that extend the cube. T-reduced only.
Integer countModelsAssume(const CompiledArtifact& a, std::span<const Literal> cube,
                          QueryStats* stats = nullptr);

/// ME: streams total models in lexicographic order of variable index, true
/// before false. The sink returns false to stop early. T-reduced only.
void enumerateModels(const CompiledArtifact& a,
                     const std::function<bool(const LiteralSet&)>& sink,
                     QueryStats* stats = nullptr);
std::vector<LiteralSet> enumerateModels(const CompiledArtifact& a);

/// EQ and SE. Both artifacts must share mode, alpha and OBDD manager.
bool equivalent(const CompiledArtifact& a, const CompiledArtifact& b);
bool sententialEntails(const CompiledArtifact& a, const CompiledArtifact& b);

/// Rebuilds an OBDD-backed artifact inside `manager` so it can be compared
/// with artifacts already living there. The manager order must match.
CompiledArtifact rehome(const CompiledArtifact& a, const std::shared_ptr<ObddManager>& manager);

/// Residual of the root under the cube, constants propagated. The result is
/// marked as conditioned and is smoothed over the remaining variables only.
CompiledArtifact condition(const CompiledArtifact& a, std::span<const Literal> cube);

/// Validates a clause or cube against the artifact: variables in range, no
/// variable twice. Returns it sorted.
LiteralSet checkLiterals(const CompiledArtifact& a, std::span<const Literal> lits,
                         const char* what);

}  // namespace tkc
