#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "tkc/atom.hpp"
#include "tkc/formula.hpp"

namespace tkc {

/// Owns the atom table, the T-formula store and a store for propositional
/// abstractions. Single-writer.
class Context {
 public:
  AtomTable& atomTable() { return atoms_; }
  const AtomTable& atomTable() const { return atoms_; }
  FormulaStore& terms() { return terms_; }
  const FormulaStore& terms() const { return terms_; }
  FormulaStore& prop() { return prop_; }
  const FormulaStore& prop() const { return prop_; }

  FormulaId top() const { return terms_.top(); }
  FormulaId bottom() const { return terms_.bottom(); }

  FormulaId boolean(const std::string& name);
  /// Literal for `terms CMP constant`, normalized (may be a negative literal).
  FormulaId linear(const std::map<std::string, Rational>& terms, Comparison cmp,
                   const Rational& constant);
  FormulaId literal(const Atom& atom, bool positive);

  const Atom& atom(AtomId id) const { return atoms_.at(id); }

  /// Atoms of f in first-construction order.
  AtomSet atomsOf(FormulaId f) const;

 private:
  AtomTable atoms_;
  FormulaStore terms_;
  FormulaStore prop_;
};

/// Bijection between the atoms of an AtomSet and variables 1..|alpha|.
struct AbstractionMap {
  std::vector<AtomId> atomOfVar;  // index 0 unused
  std::unordered_map<AtomId, Var> varOfAtom;

  std::size_t size() const { return atomOfVar.empty() ? 0 : atomOfVar.size() - 1; }
};

/// Interns every atom of alpha into the context and builds the map.
AbstractionMap makeAbstractionMap(Context& ctx, const AtomSet& alpha);

struct Abstraction {
  FormulaId formula;  // in ctx.prop()
  AbstractionMap map;
};

/// Boolean abstraction of f over alpha. Throws Error listing the atoms of f
/// missing from alpha.
Abstraction abstract(Context& ctx, FormulaId f, const AtomSet& alpha);
FormulaId abstractWith(Context& ctx, FormulaId f, const AbstractionMap& map);

/// Inverse of abstract(). Throws Error on unmapped variables.
FormulaId refine(Context& ctx, FormulaId propositional, const AbstractionMap& map);

}  // namespace tkc
