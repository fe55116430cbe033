#include "doctest.h"
#include "support.hpp"
#include "tkc/errors.hpp"
#include "tkc/lemmas.hpp"
#include "tkc/theory.hpp"

using namespace tkc;
using namespace tkc::test;

namespace {

std::vector<LiteralSet> cubes(const std::vector<Mask>& masks, std::size_t n) {
  std::vector<LiteralSet> out;
  for (Mask m : masks) out.push_back(maskToCube(m, n));
  return out;
}

bool satisfiesAll(const LemmaSet& lemmas, Mask m) {
  for (const TLemma& c : lemmas.lemmas) {
    bool sat = false;
    for (Literal l : c.literals) sat = sat || (((m >> (l.var - 1)) & 1) != 0) == l.positive;
    if (!sat) return false;
  }
  return true;
}

void checkTValid(const LemmaSet& set) {
  for (const TLemma& c : set.lemmas) {
    REQUIRE_FALSE(c.literals.empty());
    CHECK(std::is_sorted(c.literals.begin(), c.literals.end()));
    LiteralSet neg;
    for (Literal l : c.literals) neg.push_back(~l);
    CHECK_FALSE(checkConjunction(set.alpha, neg).sat);
  }
  CHECK(std::is_sorted(set.lemmas.begin(), set.lemmas.end()));
  CHECK(std::adjacent_find(set.lemmas.begin(), set.lemmas.end()) == set.lemmas.end());
  CHECK(lemmasAreValid(set));
}

}  // namespace

TEST_CASE("the disjunction over x <= 0 and x = 1 needs one lemma") {
  Context ctx;
  const FormulaId phi = phi1(ctx);
  const AtomSet alpha = ctx.atomsOf(phi);
  const LemmaSet l = enumerateLemmas(ctx, phi, alpha);
  REQUIRE(l.size() == 1);
  CHECK(l.lemmas[0].literals == LiteralSet{{1, false}, {2, false}});
  CHECK(l.target == LemmaTarget::ForFormula);

  const LemmaSet neg = enumerateLemmas(ctx, ctx.terms().negate(phi), alpha);
  CHECK(neg.size() == 0);
}

TEST_CASE("two-clause example lemmas") {
  Context ctx;
  const FormulaId phi = twoClauses(ctx);
  const AtomSet alpha = ctx.atomsOf(phi);
  const LemmaSet l = enumerateLemmas(ctx, phi, alpha);
  // !(x1 <= 0) | !(x1 >= 1), i.e. !(x1 <= 0) | (x1 < 1); same for x2
  const std::vector<TLemma> expected{{LiteralSet{{1, false}, {3, true}}},
                                     {LiteralSet{{2, false}, {4, true}}}};
  CHECK(l.lemmas == expected);
  checkTValid(l);
}

TEST_CASE("rulesOut") {
  Context ctx;
  const FormulaId phi = phi1(ctx);
  const AtomSet alpha = ctx.atomsOf(phi);
  const LemmaSet l = enumerateLemmas(ctx, phi, alpha);
  const std::vector<LiteralSet> bad{{{1, true}, {2, true}}};
  CHECK(rulesOut(l, bad));

  LemmaSet empty;
  empty.alpha = alpha;
  CHECK(rulesOut(empty, std::vector<LiteralSet>{}));
  CHECK_FALSE(rulesOut(empty, bad));

  const std::vector<LiteralSet> partial{{{1, true}}};
  CHECK_THROWS_AS(rulesOut(l, partial), Error);
}

TEST_CASE("top scope rules out every inconsistent total assignment") {
  Context ctx;
  const FormulaId phi = ctx.terms().mkAnd(phi1(ctx), le(ctx, "x", 2));
  const AtomSet alpha = ctx.atomsOf(phi);
  EnumerationOptions opts;
  opts.scope = LemmaScope::Top;
  const LemmaSet l = enumerateLemmas(ctx, phi, alpha, opts);
  CHECK(l.target == LemmaTarget::ForTop);
  checkTValid(l);
  Oracle oracle(alpha);
  std::vector<Mask> inconsistent;
  for (Mask m = 0; m < (Mask{1} << alpha.size()); ++m) {
    if (!oracle.consistent(m)) inconsistent.push_back(m);
  }
  CHECK_FALSE(inconsistent.empty());
  CHECK(rulesOut(l, cubes(inconsistent, alpha.size())));
}

TEST_CASE("lemmas may mention atoms of alpha outside the formula") {
  Context ctx;
  const FormulaId x0 = le(ctx, "x", 0);
  const FormulaId phi = x0;
  AtomSet alpha = ctx.atomsOf(phi);
  alpha.add(ctx.atom(ctx.terms().node(eq(ctx, "x", 1)).symbol));
  const LemmaSet l = enumerateLemmas(ctx, phi, alpha);
  REQUIRE(l.size() == 1);
  CHECK(l.lemmas[0].literals == LiteralSet{{1, false}, {2, false}});
}

TEST_CASE("Boolean instances produce no lemmas") {
  Context ctx;
  InstanceSpec spec;
  spec.numBoolAtoms = 6;
  spec.numLraAtoms = 0;
  spec.numRationalVars = 0;
  const FormulaId phi = generate(ctx, spec);
  CHECK(enumerateLemmas(ctx, phi, ctx.atomsOf(phi)).size() == 0);
}

TEST_CASE("property: validity, completeness, conservativity, determinism") {
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    INFO("seed " << seed);
    Context ctx;
    const FormulaId phi = generate(ctx, smallSpec(seed, 10));
    const AtomSet alpha = ctx.atomsOf(phi);
    Oracle oracle(alpha);
    for (LemmaScope scope : {LemmaScope::Formula, LemmaScope::Top}) {
      EnumerationOptions opts;
      opts.scope = scope;
      const LemmaSet l = enumerateLemmas(ctx, phi, alpha, opts);
      checkTValid(l);
      const AssignmentSets sets = oracle.cttaItta(ctx, phi);
      CHECK(rulesOut(l, cubes(sets.itta, alpha.size())));
      for (Mask m : sets.ctta) CHECK(satisfiesAll(l, m));
      CHECK(enumerateLemmas(ctx, phi, alpha, opts).lemmas == l.lemmas);

      const FormulaId neg = ctx.terms().negate(phi);
      const LemmaSet ln = enumerateLemmas(ctx, neg, alpha, opts);
      checkTValid(ln);
      CHECK(rulesOut(ln, cubes(oracle.cttaItta(ctx, neg).itta, alpha.size())));

      opts.jobs = 3;
      const LemmaSet par = enumerateLemmas(ctx, phi, alpha, opts);
      checkTValid(par);
      CHECK(rulesOut(par, cubes(sets.itta, alpha.size())));
      CHECK(enumerateLemmas(ctx, phi, alpha, opts).lemmas == par.lemmas);
    }
  }
}

TEST_CASE("enumeration honours the deadline") {
  Context ctx;
  InstanceSpec spec;
  spec.numBoolAtoms = 2;
  spec.numLraAtoms = 16;
  spec.numRationalVars = 3;
  spec.dagDepth = 5;
  spec.seed = 3;
  const FormulaId phi = generate(ctx, spec);
  const Deadline expired(std::chrono::milliseconds(0));
  EnumerationOptions opts;
  opts.deadline = &expired;
  CHECK_THROWS_AS(enumerateLemmas(ctx, phi, ctx.atomsOf(phi), opts), TimeoutError);
}
