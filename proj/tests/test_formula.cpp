#include <random>

#include "doctest.h"
#include "support.hpp"
#include "tkc/errors.hpp"

using namespace tkc;
using namespace tkc::test;

namespace {

// Truth tables of two formulas over symbols 0..n-1 of one store.
bool sameTable(const FormulaStore& s, FormulaId a, FormulaId b, std::uint32_t n) {
  for (Mask m = 0; m < (Mask{1} << n); ++m) {
    auto val = [&](std::uint32_t sym) { return ((m >> sym) & 1) != 0; };
    if (s.evaluate(a, val) != s.evaluate(b, val)) return false;
  }
  return true;
}

FormulaId randomFormula(FormulaStore& s, std::mt19937_64& rng, std::uint32_t n, int depth) {
  if (depth == 0 || rng() % 5 == 0) return s.literal(rng() % n, (rng() & 1) != 0);
  const FormulaId a = randomFormula(s, rng, n, depth - 1);
  const FormulaId b = randomFormula(s, rng, n, depth - 1);
  switch (rng() % 5) {
    case 0: return s.mkAnd(a, b);
    case 1: return s.mkOr(a, b);
    case 2: return s.mkNot(a);
    case 3: return s.mkIff(a, b);
    default: return s.mkImplies(a, b);
  }
}

}  // namespace

TEST_CASE("constructors fold constants") {
  FormulaStore s;
  const FormulaId a = s.literal(0, true);
  CHECK(s.mkAnd(a, s.top()) == a);
  CHECK(s.mkOr(a, s.bottom()) == a);
  CHECK(s.mkAnd(a, s.bottom()) == s.bottom());
  CHECK(s.mkOr(a, s.top()) == s.top());
  CHECK(s.mkNot(s.top()) == s.bottom());
  CHECK(s.mkNot(s.mkNot(a)) == a);
}

TEST_CASE("hash-consing returns the same handle for equal trees") {
  Context ctx;
  FormulaStore& s = ctx.terms();
  auto build = [&] {
    const FormulaId a = ctx.linear({{"x", 1}, {"y", -1}}, Comparison::Le, 3);
    const FormulaId b = ctx.linear({{"x", 1}, {"z", -1}}, Comparison::Eq, 0);
    return s.mkOr(a, b);
  };
  const FormulaId first = build();
  const std::size_t size = s.size();
  CHECK(build() == first);
  CHECK(s.size() == size);
}

TEST_CASE("atom normalization") {
  SUBCASE("x >= 1 is the negation of x < 1") {
    auto [atom, positive] = Atom::linear({{"x", 1}}, Comparison::Ge, 1);
    CHECK_FALSE(positive);
    CHECK(atom.relation() == Relation::Lt);
    CHECK(atom.constant() == 1);
    REQUIRE(atom.coefficients().size() == 1);
    CHECK(atom.coefficients()[0].second == 1);
    CHECK(atom.str() == "x < 1");
  }
  SUBCASE("-x <= -1 and x >= 1 share an atom") {
    auto [a, pa] = Atom::linear({{"x", -1}}, Comparison::Le, -1);
    auto [b, pb] = Atom::linear({{"x", 1}}, Comparison::Ge, 1);
    CHECK(a == b);
    CHECK(pa == pb);
  }
  SUBCASE("coefficients become coprime integers with a positive leader") {
    auto [atom, positive] =
        Atom::linear({{"x", Rational(-2)}, {"y", Rational(4)}}, Comparison::Le, -2);
    // -2x + 4y <= -2  <=>  x - 2y >= 1  <=>  !(x - 2y < 1)
    CHECK_FALSE(positive);
    CHECK(atom.relation() == Relation::Lt);
    CHECK(atom.coefficients()[0] == std::pair<std::string, Rational>{"x", 1});
    CHECK(atom.coefficients()[1] == std::pair<std::string, Rational>{"y", -2});
    CHECK(atom.constant() == 1);
  }
  SUBCASE("fractions are cleared") {
    auto [atom, positive] =
        Atom::linear({{"x", Rational(1, 2)}, {"y", Rational(1, 3)}}, Comparison::Eq, 1);
    CHECK(positive);
    CHECK(atom.str() == "3*x + 2*y = 6");
  }
  SUBCASE("equalities flip sign freely") {
    auto [a, pa] = Atom::linear({{"x", -1}}, Comparison::Eq, -1);
    auto [b, pb] = Atom::linear({{"x", 1}}, Comparison::Eq, 1);
    CHECK(a == b);
    CHECK(pa);
    CHECK(pb);
  }
  SUBCASE("constraints without variables are rejected") {
    CHECK_THROWS_AS(Atom::linear({{"x", 0}}, Comparison::Le, 1), Error);
  }
  SUBCASE("holdsAt") {
    auto [atom, positive] = Atom::linear({{"x", 1}, {"y", -1}}, Comparison::Le, 3);
    CHECK(atom.holdsAt({{"x", 4}, {"y", 1}}));
    CHECK_FALSE(atom.holdsAt({{"x", 5}, {"y", 1}}));
  }
}

TEST_CASE("abstraction of the running example") {
  Context ctx;
  FormulaStore& s = ctx.terms();
  const FormulaId a = ctx.linear({{"x", 1}, {"y", -1}}, Comparison::Le, 3);
  const FormulaId b = ctx.linear({{"x", 1}, {"z", -1}}, Comparison::Eq, 0);
  const FormulaId phi = s.mkOr(a, b);
  const AtomSet alpha = ctx.atomsOf(phi);
  REQUIRE(alpha.size() == 2);
  const Abstraction abs = abstract(ctx, phi, alpha);
  FormulaStore& p = ctx.prop();
  CHECK(abs.formula == p.mkOr(p.literal(1, true), p.literal(2, true)));
  CHECK(abs.map.size() == 2);

  const FormulaId cube = p.mkAnd(p.literal(1, false), p.literal(2, true));
  CHECK(refine(ctx, cube, abs.map) == s.mkAnd(s.mkNot(a), b));
  CHECK(refine(ctx, abs.formula, abs.map) == phi);
}

TEST_CASE("abstraction of phi1 and refinement") {
  Context ctx;
  FormulaStore& s = ctx.terms();
  const FormulaId phi = phi1(ctx);
  const AtomSet alpha = ctx.atomsOf(phi);
  CHECK(alpha.at(1).str() == "x <= 0");
  CHECK(alpha.at(2).str() == "x = 1");
  const Abstraction abs = abstract(ctx, phi, alpha);
  FormulaStore& p = ctx.prop();
  CHECK(abs.formula == p.mkOr(p.literal(1, true), p.literal(2, true)));
  CHECK(abs.map.varOfAtom.at(*ctx.atomTable().find(alpha.at(1))) == 1);
  CHECK(abs.map.varOfAtom.at(*ctx.atomTable().find(alpha.at(2))) == 2);
  CHECK(refine(ctx, abs.formula, abs.map) == phi);
  const FormulaId mixed = p.mkAnd(p.literal(1, true), p.literal(2, false));
  CHECK(refine(ctx, mixed, abs.map) == s.mkAnd(le(ctx, "x", 0), s.mkNot(eq(ctx, "x", 1))));
  CHECK(abstract(ctx, s.top(), alpha).formula == p.top());
}

TEST_CASE("abstraction errors") {
  Context ctx;
  const FormulaId phi = phi1(ctx);
  AtomSet partial;
  partial.add(ctx.atom(ctx.terms().node(le(ctx, "x", 0)).symbol));
  CHECK_THROWS_WITH_AS(abstract(ctx, phi, partial), doctest::Contains("x = 1"), Error);

  const Abstraction abs = abstract(ctx, phi, ctx.atomsOf(phi));
  CHECK_THROWS_AS(refine(ctx, ctx.prop().literal(7, true), abs.map), Error);
}

TEST_CASE("unused atoms of alpha still get a variable") {
  Context ctx;
  const FormulaId phi = le(ctx, "x", 0);
  AtomSet alpha = ctx.atomsOf(phi1(ctx));
  alpha.add(ctx.atom(ctx.terms().node(le(ctx, "y", 2)).symbol));
  const Abstraction abs = abstract(ctx, phi, alpha);
  CHECK(abs.map.size() == 3);
  CHECK(abs.formula == ctx.prop().literal(1, true));
}

TEST_CASE("toNnf and negate") {
  FormulaStore s;
  const FormulaId a1 = s.literal(1, true);
  const FormulaId a2 = s.literal(2, true);

  const FormulaId nand = s.toNnf(s.mkNot(s.mkAnd(a1, a2)));
  CHECK(nand == s.mkOr(s.literal(1, false), s.literal(2, false)));

  const FormulaId iff = s.mkIff(s.mkNot(a1), a2);
  const FormulaId nnf = s.toNnf(iff);
  CHECK(s.isNnf(nnf));
  const FormulaId expected = s.mkOr(s.mkAnd(s.literal(1, false), a2), s.mkAnd(a1, s.literal(2, false)));
  for (int m = 0; m < 4; ++m) {
    auto val = [&](std::uint32_t v) { return ((m >> (v - 1)) & 1) != 0; };
    CHECK(s.evaluate(nnf, val) == s.evaluate(expected, val));
    CHECK(s.evaluate(nnf, val) == s.evaluate(iff, val));
  }

  const FormulaId already = s.mkOr(s.mkAnd(a1, s.literal(3, false)), a2);
  CHECK(s.toNnf(already) == already);

  CHECK(s.negate(s.top()) == s.bottom());
  CHECK(s.negate(s.mkOr(a1, a2)) == s.mkAnd(s.literal(1, false), s.literal(2, false)));
}

TEST_CASE("negating phi1") {
  Context ctx;
  FormulaStore& s = ctx.terms();
  CHECK(s.negate(phi1(ctx)) == s.mkAnd(s.mkNot(le(ctx, "x", 0)), s.mkNot(eq(ctx, "x", 1))));
}

TEST_CASE("residual") {
  FormulaStore s;
  const FormulaId a1 = s.literal(1, true);
  const FormulaId a2 = s.literal(2, true);
  CHECK(s.residual(s.mkOr(s.literal(1, false), a2), 1, true) == a2);

  const FormulaId b = s.literal(3, true);
  const FormulaId c = s.literal(4, true);
  const FormulaId d = s.literal(5, true);
  const FormulaId phi = s.mkAnd(s.mkOr(a1, b), s.mkOr(c, d));
  CHECK(s.residual(phi, 1, false) == s.mkAnd(b, s.mkOr(c, d)));

  Context ctx;
  const FormulaId x = le(ctx, "x", 0);
  const auto sym = ctx.terms().node(x).symbol;
  CHECK(ctx.terms().residual(phi1(ctx), sym, true) == ctx.top());
}

TEST_CASE("atomsOf") {
  Context ctx;
  CHECK(ctx.atomsOf(ctx.top()).empty());
  const AtomSet a = ctx.atomsOf(phi1(ctx));
  REQUIRE(a.size() == 2);
  CHECK(a.at(1).str() == "x <= 0");
  CHECK(a.at(2).str() == "x = 1");
  const AtomSet b = ctx.atomsOf(twoClauses(ctx));
  REQUIRE(b.size() == 4);
  CHECK(b.at(1).str() == "x1 <= 0");
  CHECK(b.at(2).str() == "x2 <= 0");
  CHECK(b.at(3).str() == "x1 < 1");
  CHECK(b.at(4).str() == "x2 < 1");
}

TEST_CASE("literal lists parse against an atom set") {
  Context ctx;
  const AtomSet alpha = ctx.atomsOf(phi1(ctx));
  CHECK(parseLiteralList(alpha, "x<=0, !x = 1") == LiteralSet{{1, true}, {2, false}});
  CHECK_THROWS_AS(parseLiteralList(alpha, "y <= 0"), Error);
  CHECK(alpha.literalString({2, false}) == "!x = 1");
}

TEST_CASE("property: nnf, negation and residual preserve semantics") {
  constexpr std::uint32_t n = 6;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    std::mt19937_64 rng(seed);
    FormulaStore s;
    const FormulaId f = randomFormula(s, rng, n, 5);
    const FormulaId nnf = s.toNnf(f);
    const FormulaId neg = s.negate(f);
    REQUIRE(s.isNnf(nnf));
    REQUIRE(s.isNnf(neg));
    CHECK(sameTable(s, f, nnf, n));
    CHECK(sameTable(s, s.mkNot(f), neg, n));
    CHECK(sameTable(s, f, s.negate(neg), n));

    const std::uint32_t v = rng() % n;
    const std::uint32_t w = (v + 1 + rng() % (n - 1)) % n;
    const bool bv = rng() & 1;
    const bool bw = rng() & 1;
    const FormulaId r = s.residual(f, v, bv);
    CHECK_FALSE(s.mentions(r, v));
    Valuation both{{v, bv}, {w, bw}};
    CHECK(s.residual(f, both) == s.residual(r, w, bw));
    for (Mask m = 0; m < (Mask{1} << n); ++m) {
      Mask fixed = bv ? (m | (Mask{1} << v)) : (m & ~(Mask{1} << v));
      auto val = [&](std::uint32_t sym) { return ((fixed >> sym) & 1) != 0; };
      REQUIRE(s.evaluate(r, val) == s.evaluate(f, val));
    }
  }
}

TEST_CASE("property: refine inverts abstract on generated instances") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Context ctx;
    const FormulaId phi = ctx.terms().toNnf(generate(ctx, smallSpec(seed)));
    const AtomSet alpha = ctx.atomsOf(phi);
    const Abstraction abs = abstract(ctx, phi, alpha);
    CHECK(refine(ctx, abs.formula, abs.map) == phi);
    CHECK(ctx.prop().dagSize(abs.formula) == ctx.terms().dagSize(phi));
  }
}
