#pragma once

#include <cstdint>

#include "tkc/context.hpp"

namespace tkc {

/// Shape of a random non-CNF instance.
struct InstanceSpec {
  unsigned numBoolAtoms = 2;
  unsigned numLraAtoms = 4;
  unsigned numRationalVars = 2;
  unsigned dagDepth = 3;
  /// Relative weights of and/or/not/iff/implies at internal nodes.
  double weightAnd = 4;
  double weightOr = 4;
  double weightNot = 1;
  double weightIff = 1;
  double weightImplies = 1;
  std::uint64_t seed = 1;
};

/// Random formula over exactly numBoolAtoms + numLraAtoms distinct atoms.
/// Deterministic in `spec`. Arithmetic atoms relate one or two variables
/// with small integer coefficients and constants, so theory conflicts are
/// frequent. The result always contains an or of ands below the root.
FormulaId generate(Context& ctx, const InstanceSpec& spec);

}  // namespace tkc
