#include "tkc/ddnnf.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "tkc/errors.hpp"

namespace tkc {

std::size_t DdnnfGraph::KeyHash::operator()(const Key& k) const noexcept {
  std::size_t h = static_cast<std::size_t>(k.kind) * 0x9e3779b97f4a7c15ULL;
  h ^= (static_cast<std::size_t>(k.var) << 1 | k.positive) + 0x9e3779b9 + (h << 6) + (h >> 2);
  for (DdnnfRef c : k.kids) h ^= c.index + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

DdnnfGraph::DdnnfGraph() {
  make(DKind::True, 0, true, {});
  make(DKind::False, 0, true, {});
}

DdnnfRef DdnnfGraph::make(DKind kind, Var var, bool positive, std::vector<DdnnfRef> kids) {
  Key key{kind, var, positive, std::move(kids)};
  if (auto it = unique_.find(key); it != unique_.end()) return it->second;
  DdnnfNode n;
  n.kind = kind;
  n.var = var;
  n.positive = positive;
  n.kids = key.kids;
  std::vector<Var> support;
  if (kind == DKind::Lit || kind == DKind::Decision) support.push_back(var);
  for (DdnnfRef k : n.kids) {
    const auto& s = nodes_[k.index].support;
    std::vector<Var> merged;
    std::set_union(support.begin(), support.end(), s.begin(), s.end(), std::back_inserter(merged));
    support.swap(merged);
  }
  n.support = std::move(support);
  const DdnnfRef ref{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(std::move(n));
  unique_.emplace(std::move(key), ref);
  return ref;
}

DdnnfRef DdnnfGraph::literal(Var var, bool positive) { return make(DKind::Lit, var, positive, {}); }
DdnnfRef DdnnfGraph::conjoin(std::vector<DdnnfRef> kids) {
  return make(DKind::And, 0, true, std::move(kids));
}
DdnnfRef DdnnfGraph::disjoin(std::vector<DdnnfRef> kids) {
  return make(DKind::Or, 0, true, std::move(kids));
}
DdnnfRef DdnnfGraph::decision(Var var, DdnnfRef hi, DdnnfRef lo) {
  return make(DKind::Decision, var, true, {hi, lo});
}

std::vector<DdnnfRef> DdnnfGraph::reachable(DdnnfRef root) const {
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<DdnnfRef> stack{root};
  std::vector<DdnnfRef> out;
  while (!stack.empty()) {
    DdnnfRef r = stack.back();
    stack.pop_back();
    if (seen[r.index]) continue;
    seen[r.index] = 1;
    out.push_back(r);
    for (DdnnfRef k : nodes_[r.index].kids) stack.push_back(k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

DdnnfRef DdnnfGraph::import(const DdnnfGraph& from, DdnnfRef root) {
  std::unordered_map<std::uint32_t, DdnnfRef> map;
  for (DdnnfRef r : from.reachable(root)) {
    const DdnnfNode& n = from.node(r);
    std::vector<DdnnfRef> kids;
    for (DdnnfRef k : n.kids) kids.push_back(map.at(k.index));
    map[r.index] = make(n.kind, n.var, n.positive, std::move(kids));
  }
  return map.at(root.index);
}

DdnnfEvaluator::DdnnfEvaluator(const DdnnfGraph& graph, DdnnfRef root)
    : graph_(graph), order_(graph.reachable(root)), memo_(graph.size(), 0) {}

bool DdnnfEvaluator::operator()(const std::function<bool(Var)>& value) const {
  for (DdnnfRef r : order_) {
    const DdnnfNode& n = graph_.node(r);
    bool v = false;
    switch (n.kind) {
      case DKind::True: v = true; break;
      case DKind::False: v = false; break;
      case DKind::Lit: v = value(n.var) == n.positive; break;
      case DKind::And:
        v = std::all_of(n.kids.begin(), n.kids.end(), [&](DdnnfRef k) { return memo_[k.index]; });
        break;
      case DKind::Or:
        v = std::any_of(n.kids.begin(), n.kids.end(), [&](DdnnfRef k) { return memo_[k.index]; });
        break;
      case DKind::Decision: v = memo_[(value(n.var) ? n.kids[0] : n.kids[1]).index]; break;
    }
    memo_[r.index] = v;
  }
  return memo_[order_.back().index];
}

bool DdnnfEvaluator::evaluateMask(std::uint64_t mask) const {
  return (*this)([mask](Var v) { return ((mask >> (v - 1)) & 1) != 0; });
}

namespace {

bool disjoint(std::span<const Var> a, std::span<const Var> b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return false;
    if (*i < *j) ++i; else ++j;
  }
  return true;
}

bool sameSupport(std::span<const Var> a, std::span<const Var> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

ValidationReport validate(const DdnnfGraph& graph, DdnnfRef root,
                          std::optional<std::size_t> alphaSize) {
  ValidationReport report;
  auto note = [&](const std::string& what) {
    if (report.firstViolation.empty()) report.firstViolation = what;
  };
  for (DdnnfRef r : graph.reachable(root)) {
    const DdnnfNode& n = graph.node(r);
    const std::string where = "node " + std::to_string(r.index);
    switch (n.kind) {
      case DKind::And:
        for (std::size_t i = 0; i < n.kids.size() && report.decomposable; ++i) {
          for (std::size_t j = i + 1; j < n.kids.size(); ++j) {
            if (!disjoint(graph.support(n.kids[i]), graph.support(n.kids[j]))) {
              report.decomposable = false;
              note(where + ": and-children share a variable");
              break;
            }
          }
        }
        break;
      case DKind::Or:
        report.deterministic = false;
        note(where + ": or-node is not a decision node");
        for (std::size_t i = 1; i < n.kids.size(); ++i) {
          if (!sameSupport(graph.support(n.kids[0]), graph.support(n.kids[i]))) {
            report.smooth = false;
            note(where + ": or-branches mention different variables");
            break;
          }
        }
        break;
      case DKind::Decision: {
        const auto hi = graph.support(n.kids[0]);
        const auto lo = graph.support(n.kids[1]);
        if (std::binary_search(hi.begin(), hi.end(), n.var) ||
            std::binary_search(lo.begin(), lo.end(), n.var)) {
          report.decomposable = false;
          note(where + ": decision variable reappears below the decision");
        }
        if (!sameSupport(hi, lo)) {
          report.smooth = false;
          note(where + ": decision branches mention different variables");
        }
        break;
      }
      default:
        break;
    }
  }
  if (alphaSize && root != graph.bottom() && graph.support(root).size() != *alphaSize) {
    report.smooth = false;
    note("root does not mention every atom of the atom set");
  }
  return report;
}

DdnnfRef smooth(DdnnfGraph& graph, DdnnfRef root, std::size_t alphaSize) {
  std::vector<Var> all(alphaSize);
  std::iota(all.begin(), all.end(), Var{1});
  return smooth(graph, root, all);
}

DdnnfRef smooth(DdnnfGraph& graph, DdnnfRef root, std::span<const Var> cover) {
  if (root == graph.bottom()) return root;
  std::unordered_map<std::uint32_t, DdnnfRef> memo;

  auto pad = [&](DdnnfRef r, std::span<const Var> want) {
    std::vector<Var> missing;
    const auto have = graph.support(r);
    std::set_difference(want.begin(), want.end(), have.begin(), have.end(),
                        std::back_inserter(missing));
    if (missing.empty()) return r;
    std::vector<DdnnfRef> kids;
    if (graph.node(r).kind == DKind::And) {
      kids = graph.node(r).kids;
    } else if (r != graph.top()) {
      kids.push_back(r);
    }
    for (Var u : missing) kids.push_back(graph.decision(u, graph.top(), graph.top()));
    if (kids.size() == 1) return kids.front();
    return graph.conjoin(std::move(kids));
  };

  for (DdnnfRef r : graph.reachable(root)) {
    const DdnnfNode n = graph.node(r);
    DdnnfRef out = r;
    switch (n.kind) {
      case DKind::And: {
        std::vector<DdnnfRef> kids;
        for (DdnnfRef k : n.kids) kids.push_back(memo.at(k.index));
        out = graph.conjoin(std::move(kids));
        break;
      }
      case DKind::Or: {
        std::vector<DdnnfRef> kids;
        for (DdnnfRef k : n.kids) kids.push_back(pad(memo.at(k.index), n.support));
        out = graph.disjoin(std::move(kids));
        break;
      }
      case DKind::Decision: {
        std::vector<Var> below;
        for (Var v : n.support) {
          if (v != n.var) below.push_back(v);
        }
        DdnnfRef hi = memo.at(n.kids[0].index);
        DdnnfRef lo = memo.at(n.kids[1].index);
        auto guarded = [&](bool positive, DdnnfRef child) {
          const DdnnfRef lit = graph.literal(n.var, positive);
          const DdnnfRef padded = pad(child, below);
          return padded == graph.top() ? lit : graph.conjoin({lit, padded});
        };
        if (hi == graph.bottom()) {
          out = guarded(false, lo);
        } else if (lo == graph.bottom()) {
          out = guarded(true, hi);
        } else {
          out = graph.decision(n.var, pad(hi, below), pad(lo, below));
        }
        break;
      }
      default:
        break;
    }
    memo[r.index] = out;
  }
  std::vector<Var> want(cover.begin(), cover.end());
  const auto have = graph.support(root);
  want.insert(want.end(), have.begin(), have.end());
  std::sort(want.begin(), want.end());
  want.erase(std::unique(want.begin(), want.end()), want.end());
  return pad(memo.at(root.index), want);
}

std::vector<FormulaId> partition(FormulaStore& store, FormulaId residual) {
  const FormulaNode& n = store.node(residual);
  if (n.op != Op::And) return {residual};
  const std::vector<FormulaId> kids = n.kids;

  std::vector<std::size_t> parent(kids.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::unordered_map<std::uint32_t, std::size_t> owner;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    for (std::uint32_t s : store.symbols(kids[i])) {
      auto [it, inserted] = owner.try_emplace(s, i);
      if (!inserted) {
        std::size_t a = find(it->second);
        std::size_t b = find(i);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<FormulaId>> groups;
  std::unordered_map<std::size_t, std::size_t> groupOf;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    auto [it, inserted] = groupOf.try_emplace(find(i), groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(kids[i]);
  }
  if (groups.size() == 1) return {residual};
  std::vector<FormulaId> out;
  for (const auto& g : groups) out.push_back(store.mkAnd(g));
  return out;
}

Literal selectLiteral(const FormulaStore& store, FormulaId residual) {
  if (residual == store.top() || residual == store.bottom()) {
    throw Error("selectLiteral on a constant formula");
  }
  std::unordered_map<std::uint32_t, std::size_t> count;
  if (store.op(residual) == Op::Lit) return {store.node(residual).symbol, true};
  std::vector<FormulaId> stack{residual};
  std::vector<char> seen(store.size(), 0);
  while (!stack.empty()) {
    FormulaId f = stack.back();
    stack.pop_back();
    if (seen[f.index]) continue;
    seen[f.index] = 1;
    for (FormulaId k : store.node(f).kids) {
      if (store.op(k) == Op::Lit) {
        ++count[store.node(k).symbol];
      } else {
        stack.push_back(k);
      }
    }
  }
  Var best = 0;
  std::size_t bestCount = 0;
  for (const auto& [v, c] : count) {
    if (c > bestCount || (c == bestCount && v < best)) {
      best = v;
      bestCount = c;
    }
  }
  return {best, true};
}

namespace {

class Compiler {
 public:
  Compiler(DdnnfGraph& out, const CompileOptions& options, CompileStats& stats)
      : out_(out), options_(options), stats_(stats) {}

  FormulaStore& store() { return store_; }

  DdnnfRef compile(FormulaId r) {
    if (r == store_.top()) return out_.top();
    if (r == store_.bottom()) return out_.bottom();
    ++stats_.calls;
    if ((stats_.calls & 0xff) == 0) checkDeadline(options_.deadline, "compilation");
    if (options_.componentCache) {
      if (auto it = cache_.find(r.index); it != cache_.end()) {
        ++stats_.cacheHits;
        return it->second;
      }
    }
    DdnnfRef result = compileUncached(r);
    if (options_.componentCache) cache_.emplace(r.index, result);
    return result;
  }

 private:
  DdnnfRef compileUncached(FormulaId r) {
    const FormulaNode& n = store_.node(r);
    if (n.op == Op::Lit) return out_.literal(n.symbol, n.positive);
    if (n.op == Op::And) {
      // Forced literals: direct conjuncts of the top-level and.
      Valuation units;
      std::vector<DdnnfRef> parts;
      for (FormulaId k : n.kids) {
        const FormulaNode& kn = store_.node(k);
        if (kn.op != Op::Lit) continue;
        auto [it, inserted] = units.try_emplace(kn.symbol, kn.positive);
        if (!inserted && it->second != kn.positive) return out_.bottom();
        if (inserted) parts.push_back(out_.literal(kn.symbol, kn.positive));
      }
      if (!units.empty()) {
        parts.push_back(compile(store_.residual(r, units)));
        return conjoinFolded(std::move(parts));
      }
      std::vector<FormulaId> components = partition(store_, r);
      if (components.size() > 1) {
        for (FormulaId c : components) {
          DdnnfRef d = compile(c);
          if (d == out_.bottom()) return d;
          parts.push_back(d);
        }
        return conjoinFolded(std::move(parts));
      }
    }
    const Literal lit = selectLiteral(store_, r);
    ++stats_.decisions;
    DdnnfRef hi = compile(store_.residual(r, lit.var, lit.positive));
    DdnnfRef lo = compile(store_.residual(r, lit.var, !lit.positive));
    if (!lit.positive) std::swap(hi, lo);
    return decisionFolded(lit.var, hi, lo);
  }

  DdnnfRef conjoinFolded(std::vector<DdnnfRef> kids) {
    std::vector<DdnnfRef> flat;
    for (DdnnfRef k : kids) {
      if (k == out_.bottom()) return k;
      if (k == out_.top()) continue;
      if (out_.node(k).kind == DKind::And) {
        const auto& inner = out_.node(k).kids;
        flat.insert(flat.end(), inner.begin(), inner.end());
      } else {
        flat.push_back(k);
      }
    }
    if (flat.empty()) return out_.top();
    if (flat.size() == 1) return flat.front();
    return out_.conjoin(std::move(flat));
  }

  DdnnfRef decisionFolded(Var v, DdnnfRef hi, DdnnfRef lo) {
    if (hi == lo) return hi;
    if (hi == out_.bottom()) return conjoinFolded({out_.literal(v, false), lo});
    if (lo == out_.bottom()) return conjoinFolded({out_.literal(v, true), hi});
    return out_.decision(v, hi, lo);
  }

  FormulaStore store_;
  DdnnfGraph& out_;
  const CompileOptions& options_;
  CompileStats& stats_;
  std::unordered_map<std::uint32_t, DdnnfRef> cache_;
};

}  // namespace

DdnnfRef compileDdnnf(DdnnfGraph& out, const FormulaStore& store, FormulaId nnf,
                      const CompileOptions& options, CompileStats* stats) {
  if (!store.isNnf(nnf)) throw Error("compileDdnnf expects an NNF formula");
  CompileStats local;
  Compiler compiler(out, options, stats ? *stats : local);
  FormulaId root = compiler.store().import(store, nnf, [](std::uint32_t s) { return s; });
  return compiler.compile(root);
}

bool structurallyEqual(const DdnnfGraph& a, DdnnfRef ra, const DdnnfGraph& b, DdnnfRef rb) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> done;
  std::vector<std::pair<DdnnfRef, DdnnfRef>> stack{{ra, rb}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    if (!done.insert({x.index, y.index}).second) continue;
    const DdnnfNode& nx = a.node(x);
    const DdnnfNode& ny = b.node(y);
    if (nx.kind != ny.kind || nx.var != ny.var || nx.positive != ny.positive ||
        nx.kids.size() != ny.kids.size()) {
      return false;
    }
    for (std::size_t i = 0; i < nx.kids.size(); ++i) stack.emplace_back(nx.kids[i], ny.kids[i]);
  }
  return true;
}

}  // namespace tkc
