#include "tkc/lemmas.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <thread>

#include "tkc/errors.hpp"
#include "tkc/theory.hpp"

namespace tkc {

namespace {

/// One worker's search over the subtree fixed by `prefix` (first variables).
class LemmaSearch {
 public:
  LemmaSearch(const FormulaStore& source, FormulaId formula, const AtomSet& alpha,
              std::shared_ptr<const LraLayout> layout, const Deadline* deadline)
      : alpha_(alpha),
        backend_(layout),
        solver_(layout),
        deadline_(deadline),
        value_(alpha.size() + 1, 0),
        byMaxVar_(alpha.size() + 1) {
    root_ = store_.import(source, formula, [](std::uint32_t s) { return s; });
  }

  void run(const std::vector<bool>& prefix) {
    prefix_ = prefix;
    search(1, root_);
  }

  const std::vector<TLemma>& lemmas() const { return learned_; }
  const EnumerationStats& stats() const { return stats_; }

 private:
  void search(Var var, FormulaId residual) {
    ++stats_.searchNodes;
    if ((stats_.searchNodes & 0x3ff) == 0) checkDeadline(deadline_, "lemma enumeration");
    if (residual == store_.bottom()) return;
    if (var > alpha_.size()) return;

    const bool boolean = !alpha_.at(var).isLinear();
    if (boolean && !store_.mentions(residual, var) && var > prefix_.size()) {
      search(var + 1, residual);
      return;
    }
    for (bool val : {true, false}) {
      if (var <= prefix_.size() && prefix_[var - 1] != val) continue;
      const FormulaId next = store_.residual(residual, var, val);
      if (next == store_.bottom()) continue;
      value_[var] = val ? 1 : -1;
      if (boolean) {
        search(var + 1, next);
      } else if (!lemmaFalsified(var)) {
        solver_.push();
        ++stats_.theoryChecks;
        const Literal lit(var, val);
        const bool consistent = solver_.assertLiteral(lit) && solver_.check();
        if (consistent) {
          search(var + 1, next);
        } else {
          learn(solver_.conflict());
        }
        solver_.pop();
      }
      value_[var] = 0;
    }
  }

  bool lemmaFalsified(Var var) const {
    for (std::size_t idx : byMaxVar_[var]) {
      bool falsified = true;
      for (Literal l : learned_[idx].literals) {
        if (value_[l.var] != (l.positive ? -1 : 1)) {
          falsified = false;
          break;
        }
      }
      if (falsified) return true;
    }
    return false;
  }

  void learn(const LiteralSet& conflict) {
    LiteralSet current;
    for (Var v = 1; v < value_.size(); ++v) {
      if (value_[v] != 0 && alpha_.at(v).isLinear()) current.emplace_back(v, value_[v] > 0);
    }
    ConflictCore core = minimizeConflict(backend_, current, conflict);
    TLemma lemma;
    for (Literal l : core.literals) lemma.literals.push_back(~l);
    std::sort(lemma.literals.begin(), lemma.literals.end());
    Var maxVar = 0;
    for (Literal l : lemma.literals) maxVar = std::max(maxVar, l.var);
    byMaxVar_[maxVar].push_back(learned_.size());
    learned_.push_back(std::move(lemma));
  }

  const AtomSet& alpha_;
  FormulaStore store_;
  FormulaId root_;
  LraBackend backend_;
  LraSolver solver_;
  const Deadline* deadline_;
  std::vector<bool> prefix_;
  std::vector<int> value_;
  std::vector<std::vector<std::size_t>> byMaxVar_;
  std::vector<TLemma> learned_;
  EnumerationStats stats_;
};

}  // namespace

LemmaSet enumerateLemmas(const FormulaStore& store, FormulaId formula, const AtomSet& alpha,
                         const EnumerationOptions& options, EnumerationStats* stats) {
  for (std::uint32_t v : store.symbols(formula)) {
    if (v == 0 || v > alpha.size()) {
      throw Error("variable " + std::to_string(v) + " of the formula is outside the atom set");
    }
  }
  LemmaSet out;
  out.alpha = alpha;
  out.target = options.scope == LemmaScope::Top ? LemmaTarget::ForTop : LemmaTarget::ForFormula;

  FormulaStore scratch;
  const FormulaStore* source = &store;
  FormulaId target = formula;
  if (options.scope == LemmaScope::Top) {
    source = &scratch;
    target = scratch.top();
  }

  auto layout = LraLayout::build(alpha);

  // Split the first `depth` variables into 2^depth independent subtrees.
  unsigned depth = 0;
  while ((1u << depth) < std::max(1u, options.jobs) && depth < alpha.size() && depth < 10) ++depth;
  const std::size_t tasks = std::size_t{1} << depth;

  std::vector<std::vector<TLemma>> results(tasks);
  std::vector<EnumerationStats> taskStats(tasks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failureMutex;

  auto worker = [&] {
    for (std::size_t t = next++; t < tasks; t = next++) {
      try {
        std::vector<bool> prefix(depth);
        for (unsigned i = 0; i < depth; ++i) prefix[i] = ((t >> (depth - 1 - i)) & 1) == 0;
        LemmaSearch search(*source, target, alpha, layout, options.deadline);
        search.run(prefix);
        results[t] = search.lemmas();
        taskStats[t] = search.stats();
      } catch (...) {
        std::lock_guard lock(failureMutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const unsigned threads = std::min<std::size_t>(std::max(1u, options.jobs), tasks);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::set<TLemma> merged;
  EnumerationStats total;
  for (std::size_t t = 0; t < tasks; ++t) {
    merged.insert(results[t].begin(), results[t].end());
    total.theoryChecks += taskStats[t].theoryChecks;
    total.searchNodes += taskStats[t].searchNodes;
  }
  out.lemmas.assign(merged.begin(), merged.end());
  if (stats) *stats = total;
  return out;
}

LemmaSet enumerateLemmas(Context& ctx, FormulaId formula, const AtomSet& alpha,
                         const EnumerationOptions& options) {
  Abstraction abs = abstract(ctx, formula, alpha);
  return enumerateLemmas(ctx.prop(), ctx.prop().toNnf(abs.formula), alpha, options);
}

bool rulesOut(const LemmaSet& lemmas, std::span<const LiteralSet> assignments) {
  const std::size_t n = lemmas.alpha.size();
  for (const LiteralSet& rho : assignments) {
    std::vector<int> value(n + 1, 0);
    for (Literal l : rho) {
      if (l.var == 0 || l.var > n || value[l.var] != 0) {
        throw Error("assignment is not a total assignment over the atom set");
      }
      value[l.var] = l.positive ? 1 : -1;
    }
    if (rho.size() != n) throw Error("assignment is not a total assignment over the atom set");

    const bool blocked = std::any_of(lemmas.lemmas.begin(), lemmas.lemmas.end(), [&](const TLemma& c) {
      return std::all_of(c.literals.begin(), c.literals.end(),
                         [&](Literal l) { return value[l.var] == (l.positive ? -1 : 1); });
    });
    if (!blocked) return false;
  }
  return true;
}

bool lemmasAreValid(const LemmaSet& lemmas) {
  LraBackend backend(lemmas.alpha);
  for (const TLemma& c : lemmas.lemmas) {
    LiteralSet lits = c.literals;
    if (lits.empty() || !canonicalize(lits) || lits.size() != c.literals.size()) return false;
    LiteralSet negation;
    for (Literal l : lits) negation.push_back(~l);
    if (backend.checkConjunction(negation).sat) return false;
  }
  return true;
}

}  // namespace tkc
