#include "tkc/query.hpp"

#include <string>

#include "tkc/errors.hpp"

namespace tkc {

namespace {

void requireMode(const CompiledArtifact& a, Mode mode, const char* query) {
  if (a.mode != mode) {
    throw ModeViolation(std::string(query) + " requires a " +
                        (mode == Mode::TReduced ? "T-reduced" : "T-extended") + " artifact, got " +
                        (a.mode == Mode::TReduced ? "T-reduced" : "T-extended"));
  }
}

void requireDecisionOnly(const CompiledArtifact& a, const char* query) {
  if (!a.decisionOnly) {
    throw UnsupportedQuery(std::string(query) +
                           " needs a decision-deterministic DAG; this one has general Or nodes");
  }
}

// value[v]: 0 free, 1 true, -1 false
std::vector<int> cubeValues(const CompiledArtifact& a, std::span<const Literal> cube) {
  std::vector<int> value(a.alpha.size() + 1, 0);
  for (Literal l : cube) value[l.var] = l.positive ? 1 : -1;
  return value;
}

/// B-satisfiability of root & cube by one bottom-up pass.
bool consistentUnder(const CompiledArtifact& a, const std::vector<int>& value, QueryStats* stats) {
  const DdnnfGraph& g = *a.graph;
  std::vector<char> live(g.size(), 0);
  for (DdnnfRef r : a.rootOrder) {
    const DdnnfNode& n = g.node(r);
    bool ok = false;
    switch (n.kind) {
      case DKind::True: ok = true; break;
      case DKind::False: ok = false; break;
      case DKind::Lit: ok = value[n.var] == 0 || (value[n.var] == 1) == n.positive; break;
      case DKind::And:
        ok = true;
        for (DdnnfRef k : n.kids) ok = ok && live[k.index];
        break;
      case DKind::Or:
        for (DdnnfRef k : n.kids) ok = ok || live[k.index];
        break;
      case DKind::Decision:
        ok = (value[n.var] != -1 && live[n.kids[0].index]) ||
             (value[n.var] != 1 && live[n.kids[1].index]);
        break;
    }
    live[r.index] = ok;
  }
  if (stats) stats->visits += a.rootOrder.size();
  return live[a.root.index];
}

/// Models of root & cube over the free variables of the artifact, on the
/// smoothed DAG: a fixed variable's literal counts 1 or 0.
Integer countUnder(const CompiledArtifact& a, const std::vector<int>& value, QueryStats* stats) {
  const DdnnfGraph& g = *a.graph;
  std::vector<Integer> count(g.size());
  for (DdnnfRef r : a.smoothOrder) {
    const DdnnfNode& n = g.node(r);
    Integer c;
    switch (n.kind) {
      case DKind::True: c = 1; break;
      case DKind::False: c = 0; break;
      case DKind::Lit: c = (value[n.var] == 0 || (value[n.var] == 1) == n.positive) ? 1 : 0; break;
      case DKind::And:
        c = 1;
        for (DdnnfRef k : n.kids) c *= count[k.index];
        break;
      case DKind::Or:
        throw UnsupportedQuery("counting needs a decision-deterministic DAG");
      case DKind::Decision:
        if (value[n.var] != -1) c += count[n.kids[0].index];
        if (value[n.var] != 1) c += count[n.kids[1].index];
        break;
    }
    count[r.index] = std::move(c);
  }
  if (stats) stats->visits += a.smoothOrder.size();
  return count[a.smoothRoot.index];
}

std::size_t freeCount(const CompiledArtifact& a) {
  return a.alpha.size() - a.conditionedOn.size();
}

}  // namespace

LiteralSet checkLiterals(const CompiledArtifact& a, std::span<const Literal> lits, const char* what) {
  LiteralSet out(lits.begin(), lits.end());
  for (Literal l : out) {
    if (l.var == 0 || l.var > a.alpha.size()) {
      throw Error(std::string(what) + " mentions variable " + std::to_string(l.var) +
                  " outside the atom set");
    }
    for (Literal c : a.conditionedOn) {
      if (c.var == l.var) {
        throw Error(std::string(what) + " mentions conditioned atom " +
                    a.alpha.at(l.var).str());
      }
    }
  }
  std::sort(out.begin(), out.end());
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].var == out[i - 1].var) {
      throw Error(std::string(what) + " mentions atom " + a.alpha.at(out[i].var).str() +
                  (out[i].positive == out[i - 1].positive ? " twice" : " with both polarities"));
    }
  }
  return out;
}

bool isConsistent(const CompiledArtifact& a, QueryStats* stats) {
  requireMode(a, Mode::TReduced, "CO");
  return consistentUnder(a, cubeValues(a, {}), stats);
}

bool isValid(const CompiledArtifact& a, QueryStats* stats) {
  requireMode(a, Mode::TExtended, "VA");
  requireDecisionOnly(a, "VA");
  const Integer all = Integer(1) << static_cast<mp_bitcnt_t>(freeCount(a));
  return countUnder(a, cubeValues(a, {}), stats) == all;
}

bool entailsClause(const CompiledArtifact& a, std::span<const Literal> clause, QueryStats* stats) {
  requireMode(a, Mode::TReduced, "CE");
  LiteralSet negated;
  for (Literal l : checkLiterals(a, clause, "clause")) negated.push_back(~l);
  return !consistentUnder(a, cubeValues(a, negated), stats);
}

bool isImplicant(const CompiledArtifact& a, std::span<const Literal> cube, QueryStats* stats) {
  requireMode(a, Mode::TExtended, "IM");
  requireDecisionOnly(a, "IM");
  const LiteralSet gamma = checkLiterals(a, cube, "cube");
  const Integer all = Integer(1) << static_cast<mp_bitcnt_t>(freeCount(a) - gamma.size());
  return countUnder(a, cubeValues(a, gamma), stats) == all;
}

Integer countModels(const CompiledArtifact& a, QueryStats* stats) {
  requireMode(a, Mode::TReduced, "CT");
  requireDecisionOnly(a, "CT");
  return countUnder(a, cubeValues(a, {}), stats);
}

Integer countModelsAssume(const CompiledArtifact& a, std::span<const Literal> cube,
                          QueryStats* stats) {
  requireMode(a, Mode::TReduced, "CT");
  requireDecisionOnly(a, "CT");
  const LiteralSet mu = checkLiterals(a, cube, "cube");
  return countUnder(a, cubeValues(a, mu), stats);
}

void enumerateModels(const CompiledArtifact& a, const std::function<bool(const LiteralSet&)>& sink,
                     QueryStats* stats) {
  requireMode(a, Mode::TReduced, "ME");
  std::vector<int> value = cubeValues(a, a.conditionedOn);
  if (!consistentUnder(a, value, stats)) return;
  std::vector<Var> free;
  for (Var v = 1; v <= a.alpha.size(); ++v) {
    if (value[v] == 0) free.push_back(v);
  }
  // Depth-first over the free variables; every extended prefix is re-checked,
  // so each model costs O(|alpha| * |DAG|).
  bool stop = false;
  std::function<void(std::size_t)> walk = [&](std::size_t depth) {
    if (stop) return;
    if (depth == free.size()) {
      LiteralSet model;
      for (Var v = 1; v <= a.alpha.size(); ++v) {
        if (!a.conditioned() || std::none_of(a.conditionedOn.begin(), a.conditionedOn.end(),
                                             [v](Literal l) { return l.var == v; })) {
          model.push_back(Literal{v, value[v] == 1});
        }
      }
      stop = !sink(model);
      return;
    }
    const Var v = free[depth];
    for (int choice : {1, -1}) {
      value[v] = choice;
      if (consistentUnder(a, value, stats)) walk(depth + 1);
      if (stop) break;
    }
    value[v] = 0;
  };
  walk(0);
}

std::vector<LiteralSet> enumerateModels(const CompiledArtifact& a) {
  std::vector<LiteralSet> out;
  enumerateModels(a, [&](const LiteralSet& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

namespace {

void requireComparable(const CompiledArtifact& a, const CompiledArtifact& b, const char* query) {
  if (a.target != Target::Obdd || b.target != Target::Obdd || !a.obdd || !b.obdd ||
      !a.obddRoot || !b.obddRoot) {
    throw UnsupportedQuery(std::string(query) + " is only supported on OBDD-backed artifacts");
  }
  if (a.mode != b.mode) {
    throw UnsupportedQuery(std::string(query) + " needs artifacts of the same mode");
  }
  if (!(a.alpha == b.alpha)) {
    throw UnsupportedQuery(std::string(query) + " needs artifacts over the same atom set");
  }
  if (a.obdd->order() != b.obdd->order()) {
    throw UnsupportedQuery(std::string(query) + " needs artifacts with the same variable order");
  }
  if (a.obdd != b.obdd) {
    throw UnsupportedQuery(std::string(query) + " needs artifacts built in one OBDD manager");
  }
  if (a.conditioned() || b.conditioned()) {
    throw UnsupportedQuery(std::string(query) + " is not defined on conditioned artifacts");
  }
}

}  // namespace

bool equivalent(const CompiledArtifact& a, const CompiledArtifact& b) {
  requireComparable(a, b, "EQ");
  return a.obdd->equal(*a.obddRoot, *b.obddRoot);
}

bool sententialEntails(const CompiledArtifact& a, const CompiledArtifact& b) {
  requireComparable(a, b, "SE");
  return a.obdd->entails(*a.obddRoot, *b.obddRoot);
}

CompiledArtifact rehome(const CompiledArtifact& a, const std::shared_ptr<ObddManager>& manager) {
  if (a.target != Target::Obdd) throw UnsupportedQuery("only OBDD-backed artifacts can be rehomed");
  if (a.obdd == manager) return a;
  const ObddRef r = manager->fromDdnnf(*a.graph, a.root);
  CompiledArtifact out = a;
  out.obdd = manager;
  out.obddRoot = r;
  return out;
}

CompiledArtifact condition(const CompiledArtifact& a, std::span<const Literal> cube) {
  const LiteralSet mu = checkLiterals(a, cube, "cube");
  if (mu.empty()) return a;
  const std::vector<int> value = cubeValues(a, mu);
  const DdnnfGraph& g = *a.graph;
  auto out = std::make_shared<DdnnfGraph>();
  std::vector<DdnnfRef> memo(g.size());
  for (DdnnfRef r : a.rootOrder) {
    const DdnnfNode& n = g.node(r);
    DdnnfRef res;
    switch (n.kind) {
      case DKind::True: res = out->top(); break;
      case DKind::False: res = out->bottom(); break;
      case DKind::Lit:
        if (value[n.var] == 0) {
          res = out->literal(n.var, n.positive);
        } else {
          res = (value[n.var] == 1) == n.positive ? out->top() : out->bottom();
        }
        break;
      case DKind::And: {
        std::vector<DdnnfRef> kids;
        bool dead = false;
        for (DdnnfRef k : n.kids) {
          const DdnnfRef c = memo[k.index];
          if (c == out->bottom()) dead = true;
          if (c == out->top()) continue;
          if (out->node(c).kind == DKind::And) {
            kids.insert(kids.end(), out->node(c).kids.begin(), out->node(c).kids.end());
          } else {
            kids.push_back(c);
          }
        }
        if (dead) res = out->bottom();
        else if (kids.empty()) res = out->top();
        else if (kids.size() == 1) res = kids.front();
        else res = out->conjoin(std::move(kids));
        break;
      }
      case DKind::Or: {
        std::vector<DdnnfRef> kids;
        bool full = false;
        for (DdnnfRef k : n.kids) {
          const DdnnfRef c = memo[k.index];
          if (c == out->top()) full = true;
          if (c != out->bottom()) kids.push_back(c);
        }
        if (full) res = out->top();
        else if (kids.empty()) res = out->bottom();
        else if (kids.size() == 1) res = kids.front();
        else res = out->disjoin(std::move(kids));
        break;
      }
      case DKind::Decision: {
        const DdnnfRef hi = memo[n.kids[0].index];
        const DdnnfRef lo = memo[n.kids[1].index];
        if (value[n.var] == 1) res = hi;
        else if (value[n.var] == -1) res = lo;
        else if (hi == out->bottom() && lo == out->bottom()) res = out->bottom();
        else res = out->decision(n.var, hi, lo);
        break;
      }
    }
    memo[r.index] = res;
  }
  LiteralSet fixed = a.conditionedOn;
  fixed.insert(fixed.end(), mu.begin(), mu.end());
  std::sort(fixed.begin(), fixed.end());
  CompiledArtifact c = makeArtifact(a.mode, a.target, a.alpha, a.lemmas, out, memo[a.root.index],
                                    std::move(fixed));
  c.smooth = false;
  return c;
}

}  // namespace tkc
