#include <map>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "tkc/errors.hpp"
#include "tkc/obdd.hpp"

using namespace tkc;
using namespace tkc::test;

namespace {

bool evalBdd(const ObddManager& m, ObddRef r, Mask mask) {
  while (!m.isTerminal(r)) r = ((mask >> (m.var(r) - 1)) & 1) ? m.hi(r) : m.lo(r);
  return r == m.top();
}

std::uint64_t table(const ObddManager& m, ObddRef r, std::size_t n) {
  std::uint64_t t = 0;
  for (Mask x = 0; x < (Mask{1} << n); ++x) t |= std::uint64_t{evalBdd(m, r, x)} << x;
  return t;
}

// OBDD of a truth table by a disjunction of minterms.
ObddRef fromTable(ObddManager& m, std::uint64_t t, std::size_t n) {
  ObddRef out = m.bottom();
  for (Mask x = 0; x < (Mask{1} << n); ++x) {
    if (((t >> x) & 1) == 0) continue;
    ObddRef cube = m.top();
    for (Var v = 1; v <= n; ++v) cube = m.apply(BddOp::And, cube, m.variable(v, ((x >> (v - 1)) & 1) != 0));
    out = m.apply(BddOp::Or, out, cube);
  }
  return out;
}

std::vector<Var> iota(std::size_t n) {
  std::vector<Var> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<Var>(i + 1);
  return v;
}

}  // namespace

TEST_CASE("apply identities") {
  ObddManager m(iota(3));
  const ObddRef a1 = m.variable(1);
  const ObddRef a2 = m.variable(2);
  const ObddRef f = m.apply(BddOp::Or, a1, m.variable(3, false));
  CHECK(m.apply(BddOp::And, f, m.top()) == f);
  CHECK(m.apply(BddOp::Xor, f, f) == m.bottom());
  const ObddRef x = m.apply(BddOp::And, m.apply(BddOp::Or, a1, a2),
                            m.apply(BddOp::Or, m.negate(a1), m.negate(a2)));
  CHECK(table(m, x, 2) == 0b0110);
  CHECK(x == m.apply(BddOp::Xor, a1, a2));
  CHECK(m.negate(m.negate(f)) == f);
  CHECK(m.ite(a1, a2, m.bottom()) == m.apply(BddOp::And, a1, a2));
  CHECK(m.apply(BddOp::Implies, a1, a2) == m.apply(BddOp::Or, m.negate(a1), a2));
  CHECK(m.checkInvariants());
}

TEST_CASE("fromFormula") {
  FormulaStore s;
  ObddManager m(iota(2));
  CHECK(m.fromFormula(s, s.top()) == m.top());
  CHECK(m.fromFormula(s, s.bottom()) == m.bottom());
  const FormulaId iff = s.mkIff(s.literal(1, true), s.literal(2, true));
  const ObddRef r = m.fromFormula(s, iff);
  CHECK(m.nodeCount(r) == 3);
  CHECK(m.var(r) == 1);
  CHECK(m.var(m.hi(r)) == 2);
  CHECK(m.var(m.lo(r)) == 2);
  CHECK(m.hi(m.hi(r)) == m.top());
  CHECK(m.lo(m.lo(r)) == m.top());
  CHECK(m.fromFormula(s, s.toNnf(iff)) == r);
  CHECK_THROWS_AS(m.fromFormula(s, s.literal(5, true)), Error);
  const std::string graph = m.exportGraph(r);
  CHECK(std::count(graph.begin(), graph.end(), '\n') == 3);
}

TEST_CASE("equal and entails") {
  ObddManager m(iota(2));
  const ObddRef f = m.apply(BddOp::Or, m.variable(1), m.variable(2));
  CHECK(m.equal(f, f));
  CHECK_FALSE(m.equal(f, m.negate(f)));
  CHECK(m.entails(f, m.top()));
  CHECK(m.entails(m.bottom(), f));
  CHECK(m.entails(m.variable(1), f));
  CHECK_FALSE(m.entails(f, m.variable(1)));
}

TEST_CASE("mixed managers are rejected") {
  ObddManager a(iota(2));
  ObddManager b(iota(2));
  CHECK(a.id() != b.id());
  const ObddRef x = a.variable(1);
  const ObddRef y = b.variable(1);
  CHECK_THROWS_AS(a.apply(BddOp::And, x, y), Error);
  CHECK_THROWS_AS(a.equal(x, y), Error);
  CHECK_THROWS_AS(a.entails(x, y), Error);
  CHECK_THROWS_AS(a.variable(3), Error);
}

TEST_CASE("orders other than the identity") {
  ObddManager m({3, 1, 2});
  const ObddRef f = m.apply(BddOp::And, m.variable(1), m.variable(3));
  CHECK(m.var(f) == 3);
  CHECK(table(m, f, 3) == 0b10100000);
  DdnnfGraph g;
  const DdnnfRef d = m.toDdnnf(f, g);
  CHECK(m.fromDdnnf(g, d) == f);
  DdnnfEvaluator eval(g, d);
  for (Mask x = 0; x < 8; ++x) CHECK(eval.evaluateMask(x) == evalBdd(m, f, x));
}

TEST_CASE("Tred OBDDs of phi1 and phi2 share a root") {
  Context ctx;
  const FormulaId a = phi1(ctx);
  const FormulaId b = phi2(ctx);
  const AtomSet alpha = ctx.atomsOf(a);
  BuildOptions opts;
  opts.manager = std::make_shared<ObddManager>(iota(alpha.size()));
  const CompiledArtifact ta = buildObddArtifact(ctx, a, alpha, Mode::TReduced, opts);
  const CompiledArtifact tb = buildObddArtifact(ctx, b, alpha, Mode::TReduced, opts);
  REQUIRE(ta.obddRoot);
  REQUIRE(tb.obddRoot);
  CHECK(*ta.obddRoot == *tb.obddRoot);
  CHECK(opts.manager->equal(*ta.obddRoot, *tb.obddRoot));
  CHECK(table(*opts.manager, *ta.obddRoot, 2) == 0b0110);
  const CompiledArtifact bot =
      buildObddArtifact(ctx, ctx.bottom(), alpha, Mode::TReduced, opts);
  CHECK(*bot.obddRoot == opts.manager->bottom());

  // phi1 entails phi1 | b3 over a larger alpha
  Context big;
  const FormulaId p = phi1(big);
  const FormulaId wider = big.terms().mkOr(p, big.boolean("b3"));
  const AtomSet beta = big.atomsOf(wider);
  BuildOptions wopts;
  wopts.manager = std::make_shared<ObddManager>(iota(beta.size()));
  const CompiledArtifact narrow = buildObddArtifact(big, p, beta, Mode::TReduced, wopts);
  const CompiledArtifact wide = buildObddArtifact(big, wider, beta, Mode::TReduced, wopts);
  CHECK(wopts.manager->entails(*narrow.obddRoot, *wide.obddRoot));
  CHECK_FALSE(wopts.manager->entails(*wide.obddRoot, *narrow.obddRoot));
  Oracle oracle(beta);
  CHECK(oracle.se(big, p, wider));
}

TEST_CASE("exhaustive: all functions of three variables are canonical") {
  ObddManager m(iota(3));
  std::map<std::uint32_t, std::uint64_t> seen;
  for (std::uint64_t t = 0; t < 256; ++t) {
    const ObddRef r = fromTable(m, t, 3);
    REQUIRE(table(m, r, 3) == t);
    CHECK(seen.emplace(r.node, t).second);
  }
  CHECK(m.checkInvariants());
}

TEST_CASE("exhaustive: apply agrees with truth tables on four variables") {
  ObddManager m(iota(4));
  std::mt19937_64 rng(4);
  std::vector<std::pair<ObddRef, std::uint64_t>> fs;
  for (int i = 0; i < 60; ++i) {
    const std::uint64_t t = rng() & 0xffff;
    fs.emplace_back(fromTable(m, t, 4), t);
  }
  for (auto& [f, tf] : fs) {
    for (auto& [g, tg] : fs) {
      CHECK(table(m, m.apply(BddOp::And, f, g), 4) == (tf & tg));
      CHECK(table(m, m.apply(BddOp::Or, f, g), 4) == (tf | tg));
      CHECK(table(m, m.apply(BddOp::Xor, f, g), 4) == (tf ^ tg));
      CHECK(table(m, m.apply(BddOp::Implies, f, g), 4) == ((~tf | tg) & 0xffff));
      CHECK(m.entails(f, g) == ((tf & ~tg) == 0));
      CHECK((f == g) == (tf == tg));
    }
    CHECK(table(m, m.negate(f), 4) == (~tf & 0xffff));
  }
  CHECK(m.checkInvariants());
}

TEST_CASE("property: canonicity on equivalent formula pairs") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Context ctx;
    const FormulaId f = generate(ctx, smallSpec(seed, 10));
    const AtomSet alpha = ctx.atomsOf(f);
    const Abstraction abs = abstract(ctx, f, alpha);
    FormulaStore& p = ctx.prop();
    const FormulaId nnf = p.toNnf(abs.formula);
    const FormulaId dbl = p.negate(p.negate(abs.formula));
    ObddManager m(iota(alpha.size()));
    const ObddRef r1 = m.fromFormula(p, abs.formula);
    CHECK(m.fromFormula(p, nnf) == r1);
    CHECK(m.fromFormula(p, dbl) == r1);
    DdnnfGraph g;
    CHECK(m.fromDdnnf(g, compileDdnnf(g, p, nnf)) == r1);
    MaskEvaluator eval(p, abs.formula);
    for (Mask x = 0; x < (Mask{1} << alpha.size()); ++x) REQUIRE(evalBdd(m, r1, x) == eval(x));
  }
}
