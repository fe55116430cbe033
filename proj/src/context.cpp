#include "tkc/context.hpp"

#include "tkc/errors.hpp"

namespace tkc {

FormulaId Context::boolean(const std::string& name) { return literal(Atom::boolean(name), true); }

FormulaId Context::linear(const std::map<std::string, Rational>& terms, Comparison cmp,
                          const Rational& constant) {
  auto [atom, positive] = Atom::linear(terms, cmp, constant);
  return literal(atom, positive);
}

FormulaId Context::literal(const Atom& atom, bool positive) {
  return terms_.literal(atoms_.intern(atom), positive);
}

AtomSet Context::atomsOf(FormulaId f) const {
  AtomSet out;
  for (std::uint32_t id : terms_.symbols(f)) out.add(atoms_.at(id));
  return out;
}

AbstractionMap makeAbstractionMap(Context& ctx, const AtomSet& alpha) {
  AbstractionMap map;
  map.atomOfVar.assign(alpha.size() + 1, 0);
  for (Var v = 1; v <= alpha.size(); ++v) {
    const AtomId id = ctx.atomTable().intern(alpha.at(v));
    map.atomOfVar[v] = id;
    map.varOfAtom.emplace(id, v);
  }
  return map;
}

FormulaId abstractWith(Context& ctx, FormulaId f, const AbstractionMap& map) {
  std::string missing;
  for (std::uint32_t id : ctx.terms().symbols(f)) {
    if (!map.varOfAtom.contains(id)) {
      if (!missing.empty()) missing += ", ";
      missing += ctx.atom(id).str();
    }
  }
  if (!missing.empty()) throw Error("atoms missing from the atom set: " + missing);
  return ctx.prop().import(ctx.terms(), f, [&](std::uint32_t id) { return map.varOfAtom.at(id); });
}

Abstraction abstract(Context& ctx, FormulaId f, const AtomSet& alpha) {
  Abstraction out;
  out.map = makeAbstractionMap(ctx, alpha);
  out.formula = abstractWith(ctx, f, out.map);
  return out;
}

FormulaId refine(Context& ctx, FormulaId propositional, const AbstractionMap& map) {
  for (std::uint32_t v : ctx.prop().symbols(propositional)) {
    if (v == 0 || v >= map.atomOfVar.size()) {
      throw Error("variable " + std::to_string(v) + " is not in the abstraction map");
    }
  }
  return ctx.terms().import(ctx.prop(), propositional,
                            [&](std::uint32_t v) { return map.atomOfVar[v]; });
}

}  // namespace tkc
