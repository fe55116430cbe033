#pragma once

#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "tkc/artifact.hpp"
#include "tkc/context.hpp"
#include "tkc/generator.hpp"
#include "tkc/oracle.hpp"
#include "tkc/query.hpp"

namespace tkc {

// Printers for doctest failure messages.
inline std::ostream& operator<<(std::ostream& os, Mode m) { return os << modeName(m); }
inline std::ostream& operator<<(std::ostream& os, Target t) { return os << targetName(t); }
inline std::ostream& operator<<(std::ostream& os, LemmaTarget t) { return os << static_cast<int>(t); }
inline std::ostream& operator<<(std::ostream& os, Literal l) { return os << l.toSigned(); }
inline std::ostream& operator<<(std::ostream& os, DdnnfRef r) { return os << "#" << r.index; }
inline std::ostream& operator<<(std::ostream& os, FormulaId f) { return os << "#" << f.index; }
inline std::ostream& operator<<(std::ostream& os, ObddRef r) {
  return os << r.manager << ":" << r.node;
}
inline std::ostream& operator<<(std::ostream& os, const TLemma& c) {
  return os << formatLiterals(c.literals);
}
template <class T>
std::ostream& operator<<(std::ostream& os, const std::vector<T>& v) {
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os << "]";
}

}  // namespace tkc

namespace tkc::test {

inline FormulaId cmp1(Context& c, const char* x, Comparison op, int k) {
  return c.linear({{x, Rational(1)}}, op, Rational(k));
}
inline FormulaId le(Context& c, const char* x, int k) { return cmp1(c, x, Comparison::Le, k); }
inline FormulaId lt(Context& c, const char* x, int k) { return cmp1(c, x, Comparison::Lt, k); }
inline FormulaId eq(Context& c, const char* x, int k) { return cmp1(c, x, Comparison::Eq, k); }
inline FormulaId ge(Context& c, const char* x, int k) { return cmp1(c, x, Comparison::Ge, k); }
inline FormulaId gt(Context& c, const char* x, int k) { return cmp1(c, x, Comparison::Gt, k); }

// (x <= 0) | (x = 1)
inline FormulaId phi1(Context& c) {
  const FormulaId a = le(c, "x", 0);
  return c.terms().mkOr(a, eq(c, "x", 1));
}
// !(x <= 0) <-> (x = 1)
inline FormulaId phi2(Context& c) {
  const FormulaId a = c.terms().mkNot(le(c, "x", 0));
  return c.terms().mkIff(a, eq(c, "x", 1));
}
// ((x1 <= 0) | (x2 <= 0)) & ((x1 >= 1) | (x2 >= 1))
inline FormulaId twoClauses(Context& c) {
  FormulaStore& s = c.terms();
  const FormulaId a = le(c, "x1", 0);
  const FormulaId b = le(c, "x2", 0);
  const FormulaId d = ge(c, "x1", 1);
  const FormulaId e = ge(c, "x2", 1);
  return s.mkAnd(s.mkOr(a, b), s.mkOr(d, e));
}

/// Literal of alpha denoting the given formula literal (which may be negated
/// by normalization).
inline Literal litOf(Context& c, const AtomSet& alpha, FormulaId f) {
  const FormulaNode& n = c.terms().node(f);
  const auto v = alpha.indexOf(c.atom(n.symbol));
  return Literal{*v, n.positive};
}

inline InstanceSpec smallSpec(std::uint64_t seed, unsigned maxAtoms = 8) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 17);
  InstanceSpec spec;
  spec.seed = seed;
  const unsigned total = 2 + rng() % (maxAtoms - 1);
  spec.numLraAtoms = static_cast<unsigned>(rng() % (total + 1));
  spec.numBoolAtoms = total - spec.numLraAtoms;
  spec.numRationalVars = spec.numLraAtoms == 0 ? 0 : 1 + static_cast<unsigned>(rng() % 3);
  spec.dagDepth = 2 + static_cast<unsigned>(rng() % 3);
  return spec;
}

/// Random cube (or clause) of 1..maxLen distinct variables of 1..n.
inline LiteralSet randomLits(std::mt19937_64& rng, std::size_t n, std::size_t maxLen) {
  std::vector<Var> vars(n);
  for (Var v = 1; v <= n; ++v) vars[v - 1] = v;
  std::shuffle(vars.begin(), vars.end(), rng);
  const std::size_t len = 1 + rng() % std::min(n, maxLen);
  LiteralSet out;
  for (std::size_t i = 0; i < len; ++i) out.push_back(Literal{vars[i], (rng() & 1) != 0});
  std::sort(out.begin(), out.end());
  return out;
}

/// Satisfying masks of a compiled artifact over its alpha.
inline std::vector<Mask> artifactModels(const CompiledArtifact& a) {
  DdnnfEvaluator eval(*a.graph, a.root);
  std::vector<Mask> out;
  const std::size_t n = a.alpha.size();
  for (Mask m = 0; m < (Mask{1} << n); ++m) {
    if (eval.evaluateMask(m)) out.push_back(m);
  }
  return out;
}

}  // namespace tkc::test
