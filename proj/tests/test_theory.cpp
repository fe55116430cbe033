#include <random>
#include <stdexcept>

#include "doctest.h"
#include "support.hpp"
#include "tkc/errors.hpp"
#include "tkc/theory.hpp"

using namespace tkc;
using namespace tkc::test;

namespace {

// Independent decision procedure: Fourier-Motzkin elimination with strictness
// flags, disequalities split into the two strict half-spaces.
struct Row {
  std::map<std::string, Rational> a;  // a.x < c or a.x <= c
  Rational c;
  bool strict = false;
};

bool fmFeasible(std::vector<Row> rows, const std::vector<std::string>& vars) {
  for (const std::string& v : vars) {
    std::vector<Row> pos, neg, keep;
    for (Row& r : rows) {
      auto it = r.a.find(v);
      if (it == r.a.end() || it->second == 0) {
        if (it != r.a.end()) r.a.erase(it);
        keep.push_back(std::move(r));
      } else if (it->second > 0) {
        pos.push_back(std::move(r));
      } else {
        neg.push_back(std::move(r));
      }
    }
    for (const Row& p : pos) {
      for (const Row& n : neg) {
        const Rational sp = 1 / p.a.at(v);
        const Rational sn = -1 / n.a.at(v);
        Row out;
        for (auto& [x, k] : p.a) out.a[x] += k * sp;
        for (auto& [x, k] : n.a) out.a[x] += k * sn;
        out.a.erase(v);
        out.c = p.c * sp + n.c * sn;
        out.strict = p.strict || n.strict;
        keep.push_back(std::move(out));
      }
    }
    rows = std::move(keep);
  }
  for (const Row& r : rows) {
    if (r.strict ? !(0 < r.c) : !(0 <= r.c)) return false;
  }
  return true;
}

bool bruteForce(const AtomSet& alpha, const LiteralSet& lits) {
  std::vector<Row> base;
  std::vector<std::pair<Row, Row>> splits;
  for (Literal l : lits) {
    const Atom& atom = alpha.at(l.var);
    Row r;
    for (auto& [x, k] : atom.coefficients()) r.a[x] = k;
    r.c = atom.constant();
    Row flipped;
    for (auto& [x, k] : r.a) flipped.a[x] = -k;
    flipped.c = -r.c;
    switch (atom.relation()) {
      case Relation::Le:
        if (l.positive) {
          base.push_back(r);
        } else {
          flipped.strict = true;
          base.push_back(flipped);
        }
        break;
      case Relation::Lt:
        if (l.positive) {
          r.strict = true;
          base.push_back(r);
        } else {
          base.push_back(flipped);
        }
        break;
      case Relation::Eq:
        if (l.positive) {
          base.push_back(r);
          base.push_back(flipped);
        } else {
          r.strict = flipped.strict = true;
          splits.emplace_back(r, flipped);
        }
        break;
    }
  }
  const std::vector<std::string> vars = alpha.variables();
  for (std::size_t m = 0; m < (std::size_t{1} << splits.size()); ++m) {
    std::vector<Row> rows = base;
    for (std::size_t i = 0; i < splits.size(); ++i) {
      rows.push_back(((m >> i) & 1) ? splits[i].second : splits[i].first);
    }
    if (fmFeasible(rows, vars)) return true;
  }
  return false;
}

bool holds(const AtomSet& alpha, Literal l, const Point& p) {
  return alpha.at(l.var).holdsAt(p) == l.positive;
}

AtomSet randomAtoms(std::mt19937_64& rng, std::size_t count, std::size_t nvars) {
  AtomSet alpha;
  while (alpha.size() < count) {
    std::map<std::string, Rational> terms;
    const std::size_t arity = 1 + rng() % std::min<std::size_t>(nvars, 3);
    while (terms.size() < arity) {
      const int k = static_cast<int>(rng() % 5) - 2;
      if (k != 0) terms["x" + std::to_string(rng() % nvars)] = k;
    }
    const auto cmp = static_cast<Comparison>(rng() % 5);
    const int c = static_cast<int>(rng() % 7) - 3;
    auto [atom, positive] = Atom::linear(terms, cmp, c);
    if (!alpha.indexOf(atom)) alpha.add(atom);
  }
  return alpha;
}

}  // namespace

TEST_CASE("x <= 0 and x = 1 conflict") {
  Context ctx;
  const AtomSet alpha = ctx.atomsOf(phi1(ctx));
  const LiteralSet q{{1, true}, {2, true}};
  const TheoryVerdict v = checkConjunction(alpha, q);
  CHECK_FALSE(v.sat);
  CHECK(v.conflict == q);
}

TEST_CASE("x <= 0 and x != 1 is satisfied by x = 0") {
  Context ctx;
  const AtomSet alpha = ctx.atomsOf(phi1(ctx));
  const LiteralSet q{{1, true}, {2, false}};
  const TheoryVerdict v = checkConjunction(alpha, q);
  REQUIRE(v.sat);
  for (Literal l : q) CHECK(holds(alpha, l, v.witness));
  for (Literal l : q) CHECK(holds(alpha, l, Point{{"x", 0}}));
}

TEST_CASE("the two-clause assignment is consistent") {
  Context ctx;
  const AtomSet alpha = ctx.atomsOf(twoClauses(ctx));
  // x1 <= 0, !(x2 <= 0), !(x1 >= 1), x2 >= 1
  const LiteralSet q{{1, true}, {2, false}, {3, true}, {4, false}};
  const TheoryVerdict v = checkConjunction(alpha, q);
  REQUIRE(v.sat);
  for (Literal l : q) CHECK(holds(alpha, l, v.witness));
  const Point expected{{"x1", 0}, {"x2", 1}};
  for (Literal l : q) CHECK(holds(alpha, l, expected));
}

TEST_CASE("complementary literals conflict as a pair") {
  Context ctx;
  const AtomSet alpha = ctx.atomsOf(phi1(ctx));
  const TheoryVerdict v = checkConjunction(alpha, LiteralSet{{1, true}, {1, false}});
  CHECK_FALSE(v.sat);
  CHECK(v.conflict == LiteralSet{{1, false}, {1, true}});
}

TEST_CASE("strict bounds use the infinitesimal") {
  Context ctx;
  FormulaStore& s = ctx.terms();
  const FormulaId lo = lt(ctx, "x", 1);
  const AtomSet alpha = ctx.atomsOf(s.mkAnd(lo, gt(ctx, "x", 0)));
  // x < 1 and x > 0: sat, strictly inside
  const TheoryVerdict v = checkConjunction(alpha, LiteralSet{{1, true}, {2, false}});
  REQUIRE(v.sat);
  CHECK(v.witness.at("x") > 0);
  CHECK(v.witness.at("x") < 1);

  // x < 0 and x > 0
  Context other;
  const FormulaId lo0 = lt(other, "x", 0);
  const AtomSet beta = other.atomsOf(other.terms().mkAnd(lo0, gt(other, "x", 0)));
  CHECK_FALSE(checkConjunction(beta, LiteralSet{{1, true}, {2, false}}).sat);
}

TEST_CASE("minimizeConflict") {
  Context ctx;
  FormulaStore& s = ctx.terms();
  const FormulaId phi = phi1(ctx);
  const AtomSet alpha = ctx.atomsOf(s.mkAnd(phi, le(ctx, "y", 0)));
  const LiteralSet all{{1, true}, {2, true}, {3, false}};
  const ConflictCore core = minimizeConflict(alpha, all, all);
  CHECK(core.minimal);
  CHECK(core.literals == LiteralSet{{1, true}, {2, true}});

  const ConflictCore fixed = minimizeConflict(alpha, core.literals, core.literals);
  CHECK(fixed.literals == core.literals);

  CHECK_THROWS_AS(minimizeConflict(alpha, LiteralSet{{1, true}, {3, true}},
                                   LiteralSet{{1, true}, {3, true}}),
                  Error);

  // A one-literal core only arises from a broken backend.
  struct Broken final : TheoryBackend {
    TheoryVerdict checkConjunction(std::span<const Literal> lits) const override {
      TheoryVerdict v;
      v.sat = lits.empty();
      return v;
    }
  } broken;
  const LiteralSet one{{1, true}};
  CHECK_THROWS_AS(minimizeConflict(broken, one, one), std::logic_error);
}

TEST_CASE("Boolean backend") {
  BooleanBackend b;
  CHECK(b.checkConjunction(LiteralSet{{1, true}, {2, false}}).sat);
  const TheoryVerdict v = b.checkConjunction(LiteralSet{{1, true}, {1, false}});
  CHECK_FALSE(v.sat);
  CHECK(v.conflict == LiteralSet{{1, false}, {1, true}});
  CHECK(b.checkConjunction(LiteralSet{}).sat);
}

TEST_CASE("Boolean atoms are unconstrained in the arithmetic backend") {
  Context ctx;
  FormulaStore& s = ctx.terms();
  const FormulaId p = ctx.boolean("p");
  const AtomSet alpha = ctx.atomsOf(s.mkAnd(p, le(ctx, "x", 0)));
  CHECK(checkConjunction(alpha, LiteralSet{{1, false}, {2, true}}).sat);
}

TEST_CASE("incremental solver push and pop") {
  Context ctx;
  const AtomSet alpha = ctx.atomsOf(phi1(ctx));
  LraSolver solver(alpha);
  solver.push();
  CHECK(solver.assertLiteral({1, true}));
  CHECK(solver.check());
  solver.push();
  const bool ok = solver.assertLiteral({2, true}) && solver.check();
  CHECK_FALSE(ok);
  solver.pop();
  CHECK(solver.check());
  solver.push();
  CHECK((solver.assertLiteral({2, false}) && solver.check()));
  solver.pop();
  solver.pop();
  CHECK(solver.depth() == 0);
  CHECK((solver.assertLiteral({2, true}) && solver.check()));
}

TEST_CASE("property: verdicts agree with Fourier-Motzkin on random conjunctions") {
  std::size_t sat = 0, unsat = 0;
  for (std::uint64_t seed = 1; seed <= 600; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t nvars = 1 + rng() % 4;
    const std::size_t natoms = 1 + rng() % 6;
    const AtomSet alpha = randomAtoms(rng, natoms, nvars);
    LiteralSet q;
    for (Var v = 1; v <= alpha.size(); ++v) q.push_back({v, (rng() & 1) != 0});
    const bool expected = bruteForce(alpha, q);
    const TheoryVerdict got = checkConjunction(alpha, q);
    INFO("seed " << seed);
    REQUIRE(got.sat == expected);
    if (got.sat) {
      ++sat;
      for (Literal l : q) CHECK(holds(alpha, l, got.witness));
    } else {
      ++unsat;
      CHECK_FALSE(got.conflict.empty());
      for (Literal l : got.conflict) CHECK(std::find(q.begin(), q.end(), l) != q.end());
      CHECK_FALSE(checkConjunction(alpha, got.conflict).sat);
      const ConflictCore core = minimizeConflict(alpha, q, got.conflict);
      CHECK(core.minimal);
      CHECK_FALSE(checkConjunction(alpha, core.literals).sat);
      for (std::size_t i = 0; i < core.literals.size(); ++i) {
        LiteralSet rest = core.literals;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
        CHECK(checkConjunction(alpha, rest).sat);
      }
    }
  }
  CHECK(sat > 50);
  CHECK(unsat > 50);
}
