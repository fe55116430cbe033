#include "tkc/generator.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <set>

#include "tkc/errors.hpp"

namespace tkc {

namespace {

struct Leaf {
  FormulaId positive;  // literal denoting the atom's constraint as generated
};

class Generator {
 public:
  Generator(Context& ctx, const InstanceSpec& spec) : ctx_(ctx), spec_(spec), rng_(spec.seed) {}

  FormulaId run() {
    makeAtoms();
    if (pool_.empty()) return ctx_.top();
    std::vector<std::size_t> firstPass(pool_.size());
    std::iota(firstPass.begin(), firstPass.end(), 0);
    std::shuffle(firstPass.begin(), firstPass.end(), rng_);
    queue_.assign(firstPass.begin(), firstPass.end());

    const unsigned depth = std::max(1u, spec_.dagDepth);
    std::vector<FormulaId> parts;
    bool first = true;
    while (!queue_.empty()) {
      parts.push_back(first && depth >= 2 ? orOfAnds(depth) : build(depth));
      first = false;
    }
    if (parts.size() == 1) return parts.front();
    return ctx_.terms().mkAnd(parts);
  }

 private:
  void makeAtoms() {
    std::set<std::string> keys;
    for (unsigned i = 0; i < spec_.numBoolAtoms; ++i) {
      pool_.push_back(ctx_.boolean("b" + std::to_string(i)));
    }
    if (spec_.numLraAtoms > 0 && spec_.numRationalVars == 0) {
      throw Error("arithmetic atoms requested without rational variables");
    }
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<int> constant(-4, 4);
    std::uniform_int_distribution<int> cmpPick(0, 4);
    std::uniform_int_distribution<unsigned> varPick(0, spec_.numRationalVars - 1);
    std::bernoulli_distribution twoVars(spec_.numRationalVars > 1 ? 0.4 : 0.0);
    unsigned made = 0;
    for (unsigned tries = 0; made < spec_.numLraAtoms; ++tries) {
      if (tries > 10000 + 100 * spec_.numLraAtoms) {
        throw Error("could not draw enough distinct arithmetic atoms");
      }
      std::map<std::string, Rational> terms;
      const unsigned x = varPick(rng_);
      terms["x" + std::to_string(x)] = nonzero(coeff);
      if (twoVars(rng_)) {
        const unsigned y = (x + 1 + varPick(rng_) % (spec_.numRationalVars - 1)) % spec_.numRationalVars;
        terms["x" + std::to_string(y)] = nonzero(coeff);
      }
      const auto cmp = static_cast<Comparison>(cmpPick(rng_));
      const Rational k = constant(rng_);
      const auto [atom, polarity] = Atom::linear(terms, cmp, k);
      (void)polarity;
      if (!keys.insert(atom.key()).second) continue;
      pool_.push_back(ctx_.linear(terms, cmp, k));
      ++made;
    }
  }

  int nonzero(std::uniform_int_distribution<int>& d) {
    int c = 0;
    while (c == 0) c = d(rng_);
    return c;
  }

  FormulaId leaf() {
    std::size_t i;
    if (!queue_.empty()) {
      i = queue_.front();
      queue_.pop_front();
    } else {
      i = std::uniform_int_distribution<std::size_t>(0, pool_.size() - 1)(rng_);
    }
    const FormulaId lit = pool_[i];
    return std::bernoulli_distribution(0.3)(rng_) ? ctx_.terms().mkNot(lit) : lit;
  }

  FormulaId build(unsigned depth) {
    if (depth == 0) return leaf();
    std::discrete_distribution<int> op({spec_.weightAnd, spec_.weightOr, spec_.weightNot,
                                        spec_.weightIff, spec_.weightImplies});
    FormulaStore& s = ctx_.terms();
    switch (op(rng_)) {
      case 0: return nary(depth, true);
      case 1: return nary(depth, false);
      case 2: return s.mkNot(build(depth - 1));
      case 3: {
        const FormulaId a = build(depth - 1);
        return s.mkIff(a, build(depth - 1));
      }
      default: {
        const FormulaId a = build(depth - 1);
        return s.mkImplies(a, build(depth - 1));
      }
    }
  }

  FormulaId nary(unsigned depth, bool conj) {
    const int arity = std::uniform_int_distribution<int>(2, 3)(rng_);
    std::vector<FormulaId> kids;
    for (int i = 0; i < arity; ++i) kids.push_back(build(depth - 1));
    return conj ? ctx_.terms().mkAnd(kids) : ctx_.terms().mkOr(kids);
  }

  FormulaId orOfAnds(unsigned depth) {
    std::vector<FormulaId> kids;
    for (int i = 0; i < 2; ++i) {
      std::vector<FormulaId> conj;
      for (int j = 0; j < 2; ++j) conj.push_back(build(depth - 2));
      kids.push_back(ctx_.terms().mkAnd(conj));
    }
    return ctx_.terms().mkOr(kids);
  }

  Context& ctx_;
  const InstanceSpec& spec_;
  std::mt19937_64 rng_;
  std::vector<FormulaId> pool_;
  std::deque<std::size_t> queue_;
};

}  // namespace

FormulaId generate(Context& ctx, const InstanceSpec& spec) {
  Generator g(ctx, spec);
  return g.run();
}

}  // namespace tkc
