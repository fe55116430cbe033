#include "tkc/oracle.hpp"

#include <algorithm>

#include "tkc/errors.hpp"
#include "tkc/theory.hpp"

namespace tkc {

LiteralSet maskToCube(Mask mask, std::size_t n) {
  LiteralSet out;
  out.reserve(n);
  for (Var v = 1; v <= n; ++v) out.push_back(Literal{v, ((mask >> (v - 1)) & 1) != 0});
  return out;
}

Mask cubeToMask(std::span<const Literal> cube) {
  Mask m = 0;
  for (Literal l : cube) {
    if (l.positive) m |= Mask{1} << (l.var - 1);
  }
  return m;
}

bool lexLess(Mask a, Mask b, std::size_t n) {
  for (Var v = 1; v <= n; ++v) {
    const bool x = (a >> (v - 1)) & 1;
    const bool y = (b >> (v - 1)) & 1;
    if (x != y) return x;  // true sorts first
  }
  return false;
}

MaskEvaluator::MaskEvaluator(const FormulaStore& store, FormulaId root) {
  std::vector<FormulaId> order;
  std::vector<char> seen(store.size(), 0);
  std::vector<FormulaId> stack{root};
  while (!stack.empty()) {
    const FormulaId f = stack.back();
    stack.pop_back();
    if (seen[f.index]) continue;
    seen[f.index] = 1;
    order.push_back(f);
    for (FormulaId k : store.node(f).kids) stack.push_back(k);
  }
  std::sort(order.begin(), order.end());
  std::unordered_map<std::uint32_t, std::uint32_t> slotOf;
  for (FormulaId f : order) {
    const FormulaNode& n = store.node(f);
    Step s{n.op, n.symbol, n.positive, {}};
    for (FormulaId k : n.kids) s.kids.push_back(slotOf.at(k.index));
    slotOf[f.index] = static_cast<std::uint32_t>(steps_.size());
    steps_.push_back(std::move(s));
  }
  slot_.resize(steps_.size());
}

bool MaskEvaluator::operator()(Mask mask) const {
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const Step& s = steps_[i];
    bool v = false;
    switch (s.op) {
      case Op::True: v = true; break;
      case Op::False: v = false; break;
      case Op::Lit: v = (((mask >> (s.symbol - 1)) & 1) != 0) == s.positive; break;
      case Op::Not: v = !slot_[s.kids[0]]; break;
      case Op::And:
        v = true;
        for (auto k : s.kids) {
          if (!slot_[k]) {
            v = false;
            break;
          }
        }
        break;
      case Op::Or:
        for (auto k : s.kids) {
          if (slot_[k]) {
            v = true;
            break;
          }
        }
        break;
      case Op::Iff: v = slot_[s.kids[0]] == slot_[s.kids[1]]; break;
      case Op::Implies: v = !slot_[s.kids[0]] || slot_[s.kids[1]]; break;
    }
    slot_[i] = v;
  }
  return slot_.back();
}

Oracle::Oracle(AtomSet alpha, std::size_t bound) : alpha_(std::move(alpha)) {
  if (alpha_.size() > bound || alpha_.size() > 63) {
    throw OracleBoundExceeded("oracle refuses " + std::to_string(alpha_.size()) +
                              " atoms (bound " + std::to_string(bound) + ")");
  }
  for (Var v = 1; v <= alpha_.size(); ++v) {
    if (alpha_.at(v).kind() == Atom::Kind::Linear) linearMask_ |= Mask{1} << (v - 1);
  }
  fullMask_ = alpha_.size() == 64 ? ~Mask{0} : (Mask{1} << alpha_.size()) - 1;
}

bool Oracle::consistent(Mask total) const {
  const Mask key = total & linearMask_;
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  LiteralSet lits;
  for (Var v = 1; v <= alpha_.size(); ++v) {
    if ((linearMask_ >> (v - 1)) & 1) lits.push_back(Literal{v, ((key >> (v - 1)) & 1) != 0});
  }
  ++checks_;
  const bool sat = checkConjunction(alpha_, lits).sat;
  memo_.emplace(key, sat);
  return sat;
}

AssignmentSets Oracle::classify(const std::function<bool(Mask)>& satisfies) const {
  AssignmentSets out;
  out.atoms = alpha_.size();
  for (Mask m = 0;; ++m) {
    if (satisfies(m)) (consistent(m) ? out.ctta : out.itta).push_back(m);
    if (m == fullMask_) break;
  }
  return out;
}

std::function<bool(Mask)> Oracle::predicate(Context& ctx, FormulaId phi) const {
  const Abstraction abs = abstract(ctx, phi, alpha_);
  auto eval = std::make_shared<MaskEvaluator>(ctx.prop(), abs.formula);
  return [eval](Mask m) { return (*eval)(m); };
}

AssignmentSets Oracle::cttaItta(Context& ctx, FormulaId phi) const {
  return classify(predicate(ctx, phi));
}

AssignmentSets Oracle::cttaItta(const CompiledArtifact& artifact) const {
  if (!(artifact.alpha == alpha_)) throw Error("artifact is over a different atom set");
  auto eval = std::make_shared<DdnnfEvaluator>(*artifact.graph, artifact.root);
  return classify([eval](Mask m) { return eval->evaluateMask(m); });
}

std::vector<Mask> Oracle::consistentTotals() const {
  return classify([](Mask) { return true; }).ctta;
}

bool Oracle::co(Context& ctx, FormulaId phi) const { return !cttaItta(ctx, phi).ctta.empty(); }

bool Oracle::va(Context& ctx, FormulaId phi) const {
  const auto p = predicate(ctx, phi);
  return classify([&](Mask m) { return !p(m); }).ctta.empty();
}

bool Oracle::ce(Context& ctx, FormulaId phi, std::span<const Literal> clause) const {
  const auto p = predicate(ctx, phi);
  auto inClause = [&](Mask m) {
    return std::any_of(clause.begin(), clause.end(), [&](Literal l) {
      return (((m >> (l.var - 1)) & 1) != 0) == l.positive;
    });
  };
  return classify([&](Mask m) { return p(m) && !inClause(m); }).ctta.empty();
}

bool Oracle::im(Context& ctx, FormulaId phi, std::span<const Literal> cube) const {
  const auto p = predicate(ctx, phi);
  auto inCube = [&](Mask m) {
    return std::all_of(cube.begin(), cube.end(), [&](Literal l) {
      return (((m >> (l.var - 1)) & 1) != 0) == l.positive;
    });
  };
  return classify([&](Mask m) { return inCube(m) && !p(m); }).ctta.empty();
}

Integer Oracle::ct(Context& ctx, FormulaId phi) const {
  return Integer(static_cast<unsigned long>(cttaItta(ctx, phi).ctta.size()));
}

Integer Oracle::ctAssume(Context& ctx, FormulaId phi, std::span<const Literal> cube) const {
  const auto p = predicate(ctx, phi);
  auto inCube = [&](Mask m) {
    return std::all_of(cube.begin(), cube.end(), [&](Literal l) {
      return (((m >> (l.var - 1)) & 1) != 0) == l.positive;
    });
  };
  return Integer(static_cast<unsigned long>(
      classify([&](Mask m) { return inCube(m) && p(m); }).ctta.size()));
}

std::vector<LiteralSet> Oracle::me(Context& ctx, FormulaId phi) const {
  std::vector<Mask> models = cttaItta(ctx, phi).ctta;
  const std::size_t n = alpha_.size();
  std::sort(models.begin(), models.end(), [n](Mask a, Mask b) { return lexLess(a, b, n); });
  std::vector<LiteralSet> out;
  for (Mask m : models) out.push_back(maskToCube(m, n));
  return out;
}

bool Oracle::eq(Context& ctx, FormulaId a, FormulaId b) const {
  return cttaItta(ctx, a).ctta == cttaItta(ctx, b).ctta;
}

bool Oracle::se(Context& ctx, FormulaId a, FormulaId b) const {
  const auto x = cttaItta(ctx, a).ctta;
  const auto y = cttaItta(ctx, b).ctta;
  return std::includes(y.begin(), y.end(), x.begin(), x.end());
}

bool Oracle::checkTreduced(const std::function<bool(Mask)>& satisfies) const {
  return classify(satisfies).itta.empty();
}

bool Oracle::checkTextended(const std::function<bool(Mask)>& satisfies) const {
  return classify([&](Mask m) { return !satisfies(m); }).itta.empty();
}

bool Oracle::checkTreduced(Context& ctx, FormulaId phi) const {
  return checkTreduced(predicate(ctx, phi));
}

bool Oracle::checkTextended(Context& ctx, FormulaId phi) const {
  return checkTextended(predicate(ctx, phi));
}

namespace {

class AllSmt {
 public:
  AllSmt(const FormulaStore& prop, const AtomSet& alpha, std::span<const Literal> cube,
         const Deadline* deadline, BaselineStats* stats)
      : store_(prop), alpha_(alpha), solver_(alpha), deadline_(deadline), stats_(stats),
        fixed_(alpha.size() + 1, 0) {
    for (Literal l : cube) fixed_[l.var] = l.positive ? 1 : -1;
  }

  Integer run(FormulaId phi) {
    walk(phi, 1);
    return count_;
  }

 private:
  void walk(FormulaId f, Var v) {
    if (f == store_.bottom()) return;
    if (stats_) ++stats_->nodes;
    if ((++ticks_ & 0xff) == 0) checkDeadline(deadline_, "AllSMT enumeration");
    if (v > alpha_.size()) {
      if (f == store_.top()) ++count_;
      return;
    }
    for (bool value : {true, false}) {
      if (fixed_[v] != 0 && (fixed_[v] == 1) != value) continue;
      const Literal lit{v, value};
      solver_.push();
      bool ok = solver_.assertLiteral(lit);
      if (ok && alpha_.at(v).kind() == Atom::Kind::Linear) {
        if (stats_) ++stats_->theoryChecks;
        ok = solver_.check();
      }
      if (ok) walk(store_.residual(f, v, value), v + 1);
      solver_.pop();
    }
  }

  FormulaStore store_;
  const AtomSet& alpha_;
  LraSolver solver_;
  const Deadline* deadline_;
  BaselineStats* stats_;
  std::vector<int> fixed_;
  Integer count_ = 0;
  std::size_t ticks_ = 0;
};

}  // namespace

Integer allSmtCount(const FormulaStore& prop, FormulaId phi, const AtomSet& alpha,
                    std::span<const Literal> cube, const Deadline* deadline,
                    BaselineStats* stats) {
  AllSmt search(prop, alpha, cube, deadline, stats);
  return search.run(phi);
}

}  // namespace tkc
