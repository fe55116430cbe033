#include <random>

#include "doctest.h"
#include "support.hpp"
#include "tkc/errors.hpp"

using namespace tkc;
using namespace tkc::test;

namespace {

std::size_t countOver(const DdnnfGraph& g, DdnnfRef root, std::size_t n) {
  DdnnfEvaluator eval(g, root);
  std::size_t count = 0;
  for (Mask m = 0; m < (Mask{1} << n); ++m) count += eval.evaluateMask(m) ? 1 : 0;
  return count;
}

bool sameTable(const FormulaStore& s, FormulaId f, const DdnnfGraph& g, DdnnfRef root,
               std::size_t n) {
  DdnnfEvaluator eval(g, root);
  for (Mask m = 0; m < (Mask{1} << n); ++m) {
    auto val = [&](std::uint32_t v) { return ((m >> (v - 1)) & 1) != 0; };
    if (s.evaluate(f, val) != eval.evaluateMask(m)) return false;
  }
  return true;
}

// Random NNF over variables 1..n with shared subterms.
FormulaId randomNnf(FormulaStore& s, std::mt19937_64& rng, Var n, int depth) {
  if (depth == 0 || rng() % 6 == 0) {
    return s.literal(1 + static_cast<Var>(rng() % n), (rng() & 1) != 0);
  }
  std::vector<FormulaId> kids;
  const std::size_t k = 2 + rng() % 3;
  for (std::size_t i = 0; i < k; ++i) kids.push_back(randomNnf(s, rng, n, depth - 1));
  return (rng() & 1) ? s.mkAnd(kids) : s.mkOr(kids);
}

struct DecisionChain {
  DdnnfGraph g;
  DdnnfRef a1, na1, a2, na2, a3, na3;
  DecisionChain() {
    a1 = g.literal(1, true);
    na1 = g.literal(1, false);
    a2 = g.literal(2, true);
    na2 = g.literal(2, false);
    a3 = g.literal(3, true);
    na3 = g.literal(3, false);
  }
  DdnnfRef left() { return g.conjoin({g.disjoin({na1, a2}), g.disjoin({na2, a3})}); }
  // (A1 & A2 & A3) | (!A1 & ((A2 & A3) | !A2))
  DdnnfRef center() {
    return g.decision(1, g.conjoin({a2, a3}), g.decision(2, a3, g.top()));
  }
  // the center with !A2 padded by (A3 | !A3)
  DdnnfRef right() {
    return g.decision(1, g.conjoin({a2, a3}), g.decision(2, a3, g.decision(3, g.top(), g.top())));
  }
};

}  // namespace

TEST_CASE("compiling the two-implication chain") {
  FormulaStore s;
  const FormulaId phi = s.mkAnd(s.mkOr(s.literal(1, false), s.literal(2, true)),
                                s.mkOr(s.literal(2, false), s.literal(3, true)));
  DdnnfGraph g;
  const DdnnfRef root = compileDdnnf(g, s, phi);
  const ValidationReport r = validate(g, root);
  CHECK(r.decomposable);
  CHECK(r.deterministic);
  CHECK(countOver(g, root, 3) == 4);
  CHECK(sameTable(s, phi, g, root, 3));
  // models FFF, FFT, FTT, TTT
  DdnnfEvaluator eval(g, root);
  std::vector<Mask> models;
  for (Mask m = 0; m < 8; ++m) {
    if (eval.evaluateMask(m)) models.push_back(m);
  }
  CHECK(models == std::vector<Mask>{0b000, 0b100, 0b110, 0b111});
}

TEST_CASE("compiling constants") {
  FormulaStore s;
  DdnnfGraph g;
  CHECK(compileDdnnf(g, s, s.bottom()) == g.bottom());
  CHECK(compileDdnnf(g, s, s.top()) == g.top());
  CHECK(compileDdnnf(g, s, s.literal(2, false)) == g.literal(2, false));
}

TEST_CASE("non-NNF input is rejected") {
  FormulaStore s;
  const FormulaId f = s.mkIff(s.literal(1, true), s.literal(2, true));
  DdnnfGraph g;
  CHECK_THROWS_AS(compileDdnnf(g, s, f), Error);
}

TEST_CASE("two-clause example with its lemmas has two models") {
  Context ctx;
  const FormulaId phi = twoClauses(ctx);
  const AtomSet alpha = ctx.atomsOf(phi);
  const LemmaSet lemmas = enumerateLemmas(ctx, phi, alpha);
  const FormulaId abs = abstract(ctx, phi, alpha).formula;
  FormulaStore& p = ctx.prop();
  const FormulaId nnf = p.toNnf(augmentedFormula(ctx, abs, lemmas, Mode::TReduced));
  DdnnfGraph g;
  const DdnnfRef root = compileDdnnf(g, p, nnf);
  CHECK(countOver(g, root, 4) == 2);
  DdnnfEvaluator eval(g, root);
  // (x1<=0, x2<=0, x1<1, x2<1) = (1,0,1,0) and (0,1,0,1): x1 >= 1 is !(x1 < 1)
  CHECK(eval.evaluateMask(0b0101));
  CHECK(eval.evaluateMask(0b1010));
}

TEST_CASE("partition") {
  FormulaStore s;
  const FormulaId a = s.literal(1, true);
  const FormulaId b = s.literal(2, true);
  const FormulaId c = s.literal(3, true);
  const FormulaId d = s.literal(4, true);

  const FormulaId ab = s.mkOr(a, b);
  const FormulaId bc = s.mkOr(b, c);
  const std::vector<FormulaId> kids{ab, bc, d};
  const std::vector<FormulaId> parts = partition(s, s.mkAnd(kids));
  REQUIRE(parts.size() == 2);
  CHECK(std::find(parts.begin(), parts.end(), d) != parts.end());
  CHECK(std::find(parts.begin(), parts.end(), s.mkAnd(ab, bc)) != parts.end());

  CHECK(partition(s, ab).size() == 1);

  Context ctx;
  const FormulaId phi = twoClauses(ctx);
  const Abstraction abs = abstract(ctx, phi, ctx.atomsOf(phi));
  const std::vector<FormulaId> two = partition(ctx.prop(), ctx.prop().toNnf(abs.formula));
  REQUIRE(two.size() == 2);
  CHECK(ctx.prop().op(two[0]) == Op::Or);
  CHECK(ctx.prop().op(two[1]) == Op::Or);
}

TEST_CASE("selectLiteral") {
  FormulaStore s;
  const FormulaId f = s.mkAnd(s.mkOr(s.literal(1, true), s.literal(2, true)),
                              s.mkOr(s.literal(1, false), s.literal(3, true)));
  CHECK(selectLiteral(s, f) == Literal{1, true});
  CHECK(selectLiteral(s, s.literal(2, true)) == Literal{2, true});
  CHECK(selectLiteral(s, s.mkOr(s.literal(2, true), s.literal(1, false))) == Literal{1, true});
  CHECK_THROWS_AS(selectLiteral(s, s.top()), Error);
  CHECK_THROWS_AS(selectLiteral(s, s.bottom()), Error);
}

TEST_CASE("smoothing a decision chain") {
  DecisionChain f;
  const DdnnfRef center = f.center();
  CHECK_FALSE(validate(f.g, center).smooth);
  const DdnnfRef smoothed = smooth(f.g, center, 3);
  CHECK(smoothed == f.right());

  DecisionChain other;
  CHECK(structurallyEqual(f.g, smoothed, other.g, other.right()));

  const ValidationReport r = validate(f.g, smoothed, 3);
  CHECK(r.decomposable);
  CHECK(r.deterministic);
  CHECK(r.smooth);
  CHECK(countOver(f.g, smoothed, 3) == 4);
  CHECK(smooth(f.g, smoothed, 3) == smoothed);
}

TEST_CASE("validate") {
  DecisionChain f;
  const ValidationReport left = validate(f.g, f.left());
  CHECK_FALSE(left.decomposable);
  CHECK_FALSE(left.deterministic);
  CHECK_FALSE(left.firstViolation.empty());

  const ValidationReport lit = validate(f.g, f.a1, 1);
  CHECK(lit.decomposable);
  CHECK(lit.deterministic);
  CHECK(lit.smooth);

  CHECK_FALSE(validate(f.g, f.a1, 2).smooth);
  CHECK(validate(f.g, f.g.bottom(), 3).smooth);
}

TEST_CASE("a literal smoothed over two variables") {
  DdnnfGraph g;
  const DdnnfRef a1 = g.literal(1, true);
  const DdnnfRef s = smooth(g, a1, 2);
  CHECK(s == g.conjoin({a1, g.decision(2, g.top(), g.top())}));
  CHECK(countOver(g, s, 2) == 2);
  const std::vector<Var> cover{2, 3};
  CHECK(countOver(g, smooth(g, a1, cover), 3) == 4);
}

TEST_CASE("property: compilation is B-equivalent, cache sound, smoothing count preserving") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    INFO("seed " << seed);
    std::mt19937_64 rng(seed);
    const Var n = 3 + static_cast<Var>(rng() % 10);
    FormulaStore s;
    const FormulaId f = randomNnf(s, rng, n, 4);
    DdnnfGraph g;
    CompileStats stats;
    const DdnnfRef cached = compileDdnnf(g, s, f, {}, &stats);
    CompileOptions noCache;
    noCache.componentCache = false;
    const DdnnfRef plain = compileDdnnf(g, s, f, noCache);
    const ValidationReport r = validate(g, cached);
    REQUIRE(r.decomposable);
    REQUIRE(r.deterministic);
    CHECK(validate(g, plain).decomposable);
    CHECK(sameTable(s, f, g, cached, n));
    CHECK(sameTable(s, f, g, plain, n));

    const DdnnfRef sm = smooth(g, cached, n);
    const ValidationReport rs = validate(g, sm, n);
    CHECK(rs.smooth);
    CHECK(rs.decomposable);
    CHECK(rs.deterministic);
    CHECK(sameTable(s, f, g, sm, n));
  }
}

TEST_CASE("import copies structure") {
  DecisionChain f;
  DdnnfGraph other;
  const DdnnfRef r = other.import(f.g, f.right());
  CHECK(structurallyEqual(f.g, f.right(), other, r));
  CHECK_FALSE(structurallyEqual(f.g, f.center(), other, r));
}
