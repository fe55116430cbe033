#pragma once

#include <iosfwd>
#include <string>

#include "tkc/artifact.hpp"

namespace tkc {

/// Writes the DAG in `nnf` text form. A decision node on v becomes
/// `O v 2 a b` with a = `A 2 (L v) hi` and b = `A 2 (L -v) lo` (a bare
/// literal stands in when the branch is true). `A 0` is true, `O 0 0` false.
/// The root is the last line.
void writeNnf(std::ostream& out, const CompiledArtifact& a);
/// Map sidecar (JSON): mode, target, order, atoms, lemma clauses.
void writeMap(std::ostream& out, const CompiledArtifact& a);
/// DIMACS-like lemma dump whose header names the map file.
void writeLemmas(std::ostream& out, const LemmaSet& lemmas, const std::string& mapPath);

/// Inverse of writeNnf/writeMap. Decision gadgets are folded back into
/// decision nodes; any other `O` line becomes a general Or. Throws ParseError
/// with the line number on malformed input, Error on map mismatches.
CompiledArtifact readArtifact(std::istream& nnf, std::istream& map);

void saveArtifact(const CompiledArtifact& a, const std::string& nnfPath, const std::string& mapPath);
CompiledArtifact loadArtifact(const std::string& nnfPath, const std::string& mapPath);

/// The atom set stored in a map file.
AtomSet readMapAtoms(const std::string& mapPath);

}  // namespace tkc
