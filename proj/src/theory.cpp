#include "tkc/theory.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

#include "tkc/errors.hpp"

namespace tkc {

std::shared_ptr<const LraLayout> LraLayout::build(const AtomSet& alpha) {
  auto layout = std::make_shared<LraLayout>();
  layout->variables = alpha.variables();
  std::map<std::string, std::size_t> varColumn;
  for (std::size_t i = 0; i < layout->variables.size(); ++i) varColumn[layout->variables[i]] = i;

  // One slack column per distinct multi-variable term.
  std::map<std::string, std::size_t> slackOfTerm;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> slackTerms;
  layout->atoms.resize(alpha.size() + 1);
  for (Var v = 1; v <= alpha.size(); ++v) {
    const Atom& a = alpha.at(v);
    auto& info = layout->atoms[v];
    if (!a.isLinear()) continue;
    info.linear = true;
    info.rel = a.relation();
    info.constant = a.constant();
    const auto& coeffs = a.coefficients();
    if (coeffs.size() == 1) {
      // Normal form makes a lone coefficient 1.
      info.column = varColumn.at(coeffs.front().first);
      continue;
    }
    auto [it, inserted] = slackOfTerm.try_emplace(a.termString(), slackTerms.size());
    if (inserted) {
      std::vector<std::pair<std::size_t, Rational>> term;
      for (const auto& [name, c] : coeffs) term.emplace_back(varColumn.at(name), c);
      slackTerms.push_back(std::move(term));
    }
    info.column = layout->variables.size() + it->second;
  }
  layout->columns = layout->variables.size() + slackTerms.size();
  for (std::size_t s = 0; s < slackTerms.size(); ++s) {
    std::vector<Rational> row(layout->columns);
    for (const auto& [col, c] : slackTerms[s]) row[col] = c;
    layout->rows.push_back(std::move(row));
    layout->rowBasic.push_back(layout->variables.size() + s);
  }
  return layout;
}

LraSolver::LraSolver(std::shared_ptr<const LraLayout> layout)
    : layout_(std::move(layout)),
      rows_(layout_->rows),
      rowBasic_(layout_->rowBasic),
      basicRow_(layout_->columns, -1),
      value_(layout_->columns),
      lower_(layout_->columns),
      upper_(layout_->columns) {
  for (std::size_t r = 0; r < rowBasic_.size(); ++r) basicRow_[rowBasic_[r]] = static_cast<int>(r);
}

void LraSolver::push() { levels_.emplace_back(trail_.size(), diseqs_.size()); }

void LraSolver::pop() {
  auto [trailSize, diseqSize] = levels_.back();
  levels_.pop_back();
  while (trail_.size() > trailSize) {
    TrailEntry& e = trail_.back();
    (e.upper ? upper_ : lower_)[e.column] = std::move(e.old);
    trail_.pop_back();
  }
  diseqs_.resize(diseqSize);
}

bool LraSolver::assertLiteral(Literal lit) {
  conflict_.clear();
  const auto& info = layout_->atoms.at(lit.var);
  if (!info.linear) return true;
  const Rational& c = info.constant;
  switch (info.rel) {
    case Relation::Le:
      return lit.positive ? assertUpper(info.column, {c, 0}, lit)
                          : assertLower(info.column, {c, 1}, lit);
    case Relation::Lt:
      return lit.positive ? assertUpper(info.column, {c, -1}, lit)
                          : assertLower(info.column, {c, 0}, lit);
    case Relation::Eq:
      if (lit.positive) {
        return assertLower(info.column, {c, 0}, lit) && assertUpper(info.column, {c, 0}, lit);
      }
      diseqs_.push_back({info.column, c, lit});
      return true;
  }
  return true;
}

bool LraSolver::assertUpper(std::size_t col, const DeltaRational& v, Literal reason) {
  if (upper_[col] && upper_[col]->value <= v) return true;
  if (lower_[col] && v < lower_[col]->value) {
    conflict_ = {reason, lower_[col]->reason};
    canonicalize(conflict_);
    return false;
  }
  trail_.push_back({col, true, upper_[col]});
  upper_[col] = Bound{v, reason};
  if (basicRow_[col] < 0 && value_[col] > v) update(col, v);
  return true;
}

bool LraSolver::assertLower(std::size_t col, const DeltaRational& v, Literal reason) {
  if (lower_[col] && v <= lower_[col]->value) return true;
  if (upper_[col] && upper_[col]->value < v) {
    conflict_ = {reason, upper_[col]->reason};
    canonicalize(conflict_);
    return false;
  }
  trail_.push_back({col, false, lower_[col]});
  lower_[col] = Bound{v, reason};
  if (basicRow_[col] < 0 && value_[col] < v) update(col, v);
  return true;
}

void LraSolver::update(std::size_t col, const DeltaRational& v) {
  const DeltaRational delta = v - value_[col];
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const Rational& a = rows_[r][col];
    if (sgn(a) != 0) value_[rowBasic_[r]] = value_[rowBasic_[r]] + delta * a;
  }
  value_[col] = v;
}

void LraSolver::pivotAndUpdate(std::size_t row, std::size_t col, const DeltaRational& v) {
  const std::size_t basic = rowBasic_[row];
  const Rational a = rows_[row][col];
  const DeltaRational theta = (v - value_[basic]) / a;
  value_[basic] = v;
  value_[col] = value_[col] + theta;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (r == row) continue;
    const Rational& c = rows_[r][col];
    if (sgn(c) != 0) value_[rowBasic_[r]] = value_[rowBasic_[r]] + theta * c;
  }
  pivot(row, col);
}

void LraSolver::pivot(std::size_t row, std::size_t col) {
  const std::size_t basic = rowBasic_[row];
  std::vector<Rational>& pr = rows_[row];
  const Rational a = pr[col];
  // basic = a*col + rest  =>  col = basic/a - rest/a
  for (std::size_t k = 0; k < pr.size(); ++k) {
    if (k == col) continue;
    if (sgn(pr[k]) != 0) pr[k] = -pr[k] / a;
  }
  pr[basic] = Rational(1) / a;
  pr[col] = 0;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (r == row) continue;
    std::vector<Rational>& other = rows_[r];
    const Rational c = other[col];
    if (sgn(c) == 0) continue;
    for (std::size_t k = 0; k < other.size(); ++k) {
      if (sgn(pr[k]) != 0) other[k] += c * pr[k];
    }
    other[col] = 0;
  }
  rowBasic_[row] = col;
  basicRow_[col] = static_cast<int>(row);
  basicRow_[basic] = -1;
}

bool LraSolver::canIncrease(std::size_t col) const {
  return !upper_[col] || value_[col] < upper_[col]->value;
}

bool LraSolver::canDecrease(std::size_t col) const {
  return !lower_[col] || lower_[col]->value < value_[col];
}

bool LraSolver::simplex() {
  while (true) {
    std::size_t row = rows_.size();
    std::size_t basic = std::numeric_limits<std::size_t>::max();
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const std::size_t b = rowBasic_[r];
      const bool violated = (lower_[b] && value_[b] < lower_[b]->value) ||
                            (upper_[b] && upper_[b]->value < value_[b]);
      if (violated && b < basic) {
        basic = b;
        row = r;
      }
    }
    if (row == rows_.size()) return true;

    const std::vector<Rational>& coeffs = rows_[row];
    const bool raise = lower_[basic] && value_[basic] < lower_[basic]->value;
    std::size_t entering = layout_->columns;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      const int s = sgn(coeffs[j]);
      if (s == 0 || basicRow_[j] >= 0) continue;
      const bool ok = raise ? ((s > 0 && canIncrease(j)) || (s < 0 && canDecrease(j)))
                            : ((s < 0 && canIncrease(j)) || (s > 0 && canDecrease(j)));
      if (ok) {
        entering = j;
        break;
      }
    }
    if (entering == layout_->columns) {
      conflict_.clear();
      conflict_.push_back(raise ? lower_[basic]->reason : upper_[basic]->reason);
      for (std::size_t j = 0; j < coeffs.size(); ++j) {
        const int s = sgn(coeffs[j]);
        if (s == 0) continue;
        const bool useUpper = raise == (s > 0);
        conflict_.push_back(useUpper ? upper_[j]->reason : lower_[j]->reason);
      }
      canonicalize(conflict_);
      return false;
    }
    pivotAndUpdate(row, entering, raise ? lower_[basic]->value : upper_[basic]->value);
  }
}

bool LraSolver::check() {
  conflict_.clear();
  if (!simplex()) return false;
  return checkDisequalities();
}

bool LraSolver::checkDisequalities() {
  for (std::size_t i = 0; i < diseqs_.size(); ++i) {
    const Disequality d = diseqs_[i];
    if (!(value_[d.column] == DeltaRational(d.constant, 0))) continue;

    auto contains = [&](const LiteralSet& s) {
      return std::find(s.begin(), s.end(), d.reason) != s.end();
    };
    push();
    bool ok = assertUpper(d.column, {d.constant, -1}, d.reason) && check();
    LiteralSet below = conflict_;
    Point model = witness_;
    pop();
    if (ok) {
      witness_ = std::move(model);
      return true;
    }
    if (!contains(below)) {
      conflict_ = std::move(below);
      return false;
    }
    push();
    ok = assertLower(d.column, {d.constant, 1}, d.reason) && check();
    LiteralSet above = conflict_;
    model = witness_;
    pop();
    if (ok) {
      witness_ = std::move(model);
      return true;
    }
    if (!contains(above)) {
      conflict_ = std::move(above);
      return false;
    }
    conflict_ = std::move(below);
    conflict_.insert(conflict_.end(), above.begin(), above.end());
    canonicalize(conflict_);
    return false;
  }
  computeWitness();
  return true;
}

void LraSolver::computeWitness() {
  Rational delta = 1;
  for (std::size_t j = 0; j < value_.size(); ++j) {
    const DeltaRational& v = value_[j];
    if (lower_[j]) {
      const DeltaRational& l = lower_[j]->value;
      if (l.c < v.c && l.k > v.k) delta = std::min(delta, Rational((v.c - l.c) / (l.k - v.k)));
    }
    if (upper_[j]) {
      const DeltaRational& u = upper_[j]->value;
      if (v.c < u.c && v.k > u.k) delta = std::min(delta, Rational((u.c - v.c) / (v.k - u.k)));
    }
  }
  // Each disequality excludes at most one delta; halving terminates.
  for (bool clash = true; clash;) {
    clash = false;
    for (const auto& d : diseqs_) {
      const DeltaRational& v = value_[d.column];
      if (v.c + v.k * delta == d.constant) {
        delta /= 2;
        clash = true;
      }
    }
  }
  witness_.clear();
  for (std::size_t j = 0; j < layout_->variables.size(); ++j) {
    Rational x = value_[j].c + value_[j].k * delta;
    x.canonicalize();
    witness_[layout_->variables[j]] = x;
  }
}

namespace {

std::optional<LiteralSet> complementaryPair(std::span<const Literal> literals) {
  LiteralSet sorted(literals.begin(), literals.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].var == sorted[i - 1].var && sorted[i].positive != sorted[i - 1].positive) {
      return LiteralSet{sorted[i - 1], sorted[i]};
    }
  }
  return std::nullopt;
}

}  // namespace

TheoryVerdict LraBackend::checkConjunction(std::span<const Literal> literals) const {
  TheoryVerdict verdict;
  if (auto pair = complementaryPair(literals)) {
    verdict.conflict = *pair;
    return verdict;
  }
  LraSolver solver(layout_);
  for (Literal l : literals) {
    if (l.var == 0 || l.var >= layout_->atoms.size()) {
      throw Error("literal " + std::to_string(l.toSigned()) + " is outside the atom set");
    }
    if (!solver.assertLiteral(l)) {
      verdict.conflict = solver.conflict();
      return verdict;
    }
  }
  if (!solver.check()) {
    verdict.conflict = solver.conflict();
    return verdict;
  }
  verdict.sat = true;
  verdict.witness = solver.witness();
  return verdict;
}

TheoryVerdict BooleanBackend::checkConjunction(std::span<const Literal> literals) const {
  TheoryVerdict verdict;
  if (auto pair = complementaryPair(literals)) {
    verdict.conflict = *pair;
    return verdict;
  }
  verdict.sat = true;
  return verdict;
}

TheoryVerdict checkConjunction(const AtomSet& alpha, std::span<const Literal> literals) {
  return LraBackend(alpha).checkConjunction(literals);
}

ConflictCore minimizeConflict(const TheoryBackend& backend, std::span<const Literal> literals,
                              std::span<const Literal> conflict) {
  LiteralSet core(conflict.begin(), conflict.end());
  canonicalize(core);
  for (Literal l : core) {
    if (std::find(literals.begin(), literals.end(), l) == literals.end()) {
      throw Error("conflict literal " + std::to_string(l.toSigned()) + " not among the query");
    }
  }
  if (backend.checkConjunction(core).sat) throw Error("conflict handed to minimization is satisfiable");

  // Descending variable order.
  for (std::size_t i = core.size(); i-- > 0;) {
    LiteralSet trial;
    trial.reserve(core.size() - 1);
    for (std::size_t j = 0; j < core.size(); ++j) {
      if (j != i) trial.push_back(core[j]);
    }
    if (!backend.checkConjunction(trial).sat) core = std::move(trial);
  }
  if (core.size() < 2) {
    throw std::logic_error("single-literal theory conflict: atoms are never inconsistent alone");
  }
  return {std::move(core), true};
}

ConflictCore minimizeConflict(const AtomSet& alpha, std::span<const Literal> literals,
                              std::span<const Literal> conflict) {
  return minimizeConflict(LraBackend(alpha), literals, conflict);
}

}  // namespace tkc
