#include "tkc/obdd.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <sstream>

#include "tkc/errors.hpp"

namespace tkc {

namespace {

std::atomic<std::uint32_t> nextManagerId{1};
constexpr std::uint32_t kTerminalLevel = std::numeric_limits<std::uint32_t>::max();

std::uint64_t tripleKey(std::uint32_t level, std::uint32_t hi, std::uint32_t lo) {
  std::uint64_t h = level * 0x9e3779b97f4a7c15ULL;
  h ^= hi + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= lo + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

ObddManager::ObddManager(std::vector<Var> order) : id_(nextManagerId++), order_(std::move(order)) {
  for (std::uint32_t i = 0; i < order_.size(); ++i) {
    if (!levelOf_.emplace(order_[i], i).second) {
      throw Error("variable " + std::to_string(order_[i]) + " repeated in OBDD order");
    }
  }
  nodes_.push_back({kTerminalLevel, 0, 0});
  nodes_.push_back({kTerminalLevel, 1, 1});
}

void ObddManager::own(ObddRef r) const {
  if (r.manager != id_) throw Error("OBDD operands belong to different managers");
}

std::uint32_t ObddManager::make(std::uint32_t lvl, std::uint32_t hi, std::uint32_t lo) {
  if (hi == lo) return hi;
  auto& bucket = buckets_[tripleKey(lvl, hi, lo)];
  for (std::uint32_t n : bucket) {
    const Node& x = nodes_[n];
    if (x.level == lvl && x.hi == hi && x.lo == lo) return n;
  }
  const auto n = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back({lvl, hi, lo});
  bucket.push_back(n);
  return n;
}

ObddRef ObddManager::variable(Var v, bool positive) {
  auto it = levelOf_.find(v);
  if (it == levelOf_.end()) throw Error("variable " + std::to_string(v) + " is not in the OBDD order");
  return {id_, positive ? make(it->second, 1, 0) : make(it->second, 0, 1)};
}

std::uint32_t ObddManager::negateRec(std::uint32_t a) {
  if (a < 2) return 1 - a;
  if (auto it = negateCache_.find(a); it != negateCache_.end()) return it->second;
  const Node n = nodes_[a];
  const std::uint32_t r = make(n.level, negateRec(n.hi), negateRec(n.lo));
  negateCache_.emplace(a, r);
  return r;
}

ObddRef ObddManager::negate(ObddRef a) {
  own(a);
  return {id_, negateRec(a.node)};
}

std::uint32_t ObddManager::applyRec(BddOp op, std::uint32_t a, std::uint32_t b) {
  switch (op) {
    case BddOp::And:
      if (a == 0 || b == 0) return 0;
      if (a == 1) return b;
      if (b == 1 || a == b) return a;
      if (a > b) std::swap(a, b);
      break;
    case BddOp::Or:
      if (a == 1 || b == 1) return 1;
      if (a == 0) return b;
      if (b == 0 || a == b) return a;
      if (a > b) std::swap(a, b);
      break;
    case BddOp::Xor:
      if (a == b) return 0;
      if (a == 0) return b;
      if (b == 0) return a;
      if (a == 1) return negateRec(b);
      if (b == 1) return negateRec(a);
      if (a > b) std::swap(a, b);
      break;
    case BddOp::Implies:
      if (a == 0 || b == 1 || a == b) return 1;
      if (a == 1) return b;
      if (b == 0) return negateRec(a);
      break;
  }
  const std::uint64_t key = (static_cast<std::uint64_t>(op) << 62) ^
                            (static_cast<std::uint64_t>(a) << 31) ^ b;
  if (auto it = applyCache_.find(key); it != applyCache_.end()) return it->second;
  const std::uint32_t la = level(a);
  const std::uint32_t lb = level(b);
  const std::uint32_t top = std::min(la, lb);
  const std::uint32_t aHi = la == top ? nodes_[a].hi : a;
  const std::uint32_t aLo = la == top ? nodes_[a].lo : a;
  const std::uint32_t bHi = lb == top ? nodes_[b].hi : b;
  const std::uint32_t bLo = lb == top ? nodes_[b].lo : b;
  const std::uint32_t hi = applyRec(op, aHi, bHi);
  const std::uint32_t lo = applyRec(op, aLo, bLo);
  const std::uint32_t r = make(top, hi, lo);
  applyCache_.emplace(key, r);
  return r;
}

ObddRef ObddManager::apply(BddOp op, ObddRef a, ObddRef b) {
  own(a);
  own(b);
  return {id_, applyRec(op, a.node, b.node)};
}

ObddRef ObddManager::ite(ObddRef c, ObddRef t, ObddRef e) {
  return apply(BddOp::Or, apply(BddOp::And, c, t), apply(BddOp::And, negate(c), e));
}

ObddRef ObddManager::fromFormula(const FormulaStore& store, FormulaId root) {
  std::unordered_map<std::uint32_t, ObddRef> memo;
  std::vector<FormulaId> order;
  {
    std::vector<FormulaId> stack{root};
    std::vector<char> seen(store.size(), 0);
    while (!stack.empty()) {
      FormulaId f = stack.back();
      stack.pop_back();
      if (seen[f.index]) continue;
      seen[f.index] = 1;
      order.push_back(f);
      for (FormulaId k : store.node(f).kids) stack.push_back(k);
    }
    std::sort(order.begin(), order.end());
  }
  for (FormulaId f : order) {
    const FormulaNode& n = store.node(f);
    ObddRef r;
    switch (n.op) {
      case Op::True: r = top(); break;
      case Op::False: r = bottom(); break;
      case Op::Lit: r = variable(n.symbol, n.positive); break;
      case Op::Not: r = negate(memo.at(n.kids[0].index)); break;
      case Op::And:
        r = top();
        for (FormulaId k : n.kids) r = apply(BddOp::And, r, memo.at(k.index));
        break;
      case Op::Or:
        r = bottom();
        for (FormulaId k : n.kids) r = apply(BddOp::Or, r, memo.at(k.index));
        break;
      case Op::Iff:
        r = negate(apply(BddOp::Xor, memo.at(n.kids[0].index), memo.at(n.kids[1].index)));
        break;
      case Op::Implies:
        r = apply(BddOp::Implies, memo.at(n.kids[0].index), memo.at(n.kids[1].index));
        break;
    }
    memo[f.index] = r;
  }
  return memo.at(root.index);
}

ObddRef ObddManager::fromDdnnf(const DdnnfGraph& graph, DdnnfRef root) {
  std::unordered_map<std::uint32_t, ObddRef> memo;
  for (DdnnfRef r : graph.reachable(root)) {
    const DdnnfNode& n = graph.node(r);
    ObddRef out;
    switch (n.kind) {
      case DKind::True: out = top(); break;
      case DKind::False: out = bottom(); break;
      case DKind::Lit: out = variable(n.var, n.positive); break;
      case DKind::And:
        out = top();
        for (DdnnfRef k : n.kids) out = apply(BddOp::And, out, memo.at(k.index));
        break;
      case DKind::Or:
        out = bottom();
        for (DdnnfRef k : n.kids) out = apply(BddOp::Or, out, memo.at(k.index));
        break;
      case DKind::Decision:
        out = ite(variable(n.var), memo.at(n.kids[0].index), memo.at(n.kids[1].index));
        break;
    }
    memo[r.index] = out;
  }
  return memo.at(root.index);
}

DdnnfRef ObddManager::toDdnnf(ObddRef root, DdnnfGraph& graph) const {
  own(root);
  std::unordered_map<std::uint32_t, DdnnfRef> memo{{0, graph.bottom()}, {1, graph.top()}};
  std::vector<std::uint32_t> stack{root.node};
  while (!stack.empty()) {
    const std::uint32_t n = stack.back();
    if (memo.contains(n)) {
      stack.pop_back();
      continue;
    }
    const Node& x = nodes_[n];
    auto hi = memo.find(x.hi);
    auto lo = memo.find(x.lo);
    if (hi != memo.end() && lo != memo.end()) {
      memo[n] = graph.decision(order_[x.level], hi->second, lo->second);
      stack.pop_back();
    } else {
      if (hi == memo.end()) stack.push_back(x.hi);
      if (lo == memo.end()) stack.push_back(x.lo);
    }
  }
  return memo.at(root.node);
}

bool ObddManager::equal(ObddRef a, ObddRef b) const {
  own(a);
  own(b);
  return a.node == b.node;
}

bool ObddManager::entails(ObddRef a, ObddRef b) {
  return apply(BddOp::And, a, negate(b)) == bottom();
}

std::size_t ObddManager::nodeCount(ObddRef root) const {
  own(root);
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<std::uint32_t> stack{root.node};
  std::size_t count = 0;
  while (!stack.empty()) {
    const std::uint32_t n = stack.back();
    stack.pop_back();
    if (n < 2 || seen[n]) continue;
    seen[n] = 1;
    ++count;
    stack.push_back(nodes_[n].hi);
    stack.push_back(nodes_[n].lo);
  }
  return count;
}

std::string ObddManager::exportGraph(ObddRef root) const {
  own(root);
  std::ostringstream os;
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<std::uint32_t> stack{root.node};
  std::vector<std::uint32_t> found;
  while (!stack.empty()) {
    const std::uint32_t n = stack.back();
    stack.pop_back();
    if (n < 2 || seen[n]) continue;
    seen[n] = 1;
    found.push_back(n);
    stack.push_back(nodes_[n].hi);
    stack.push_back(nodes_[n].lo);
  }
  std::sort(found.begin(), found.end());
  for (std::uint32_t n : found) {
    os << n << ' ' << order_[nodes_[n].level] << ' ' << nodes_[n].hi << ' ' << nodes_[n].lo << '\n';
  }
  return os.str();
}

bool ObddManager::checkInvariants() const {
  std::unordered_map<std::uint64_t, int> seen;
  for (std::uint32_t n = 2; n < nodes_.size(); ++n) {
    const Node& x = nodes_[n];
    if (x.hi == x.lo) return false;
    if (level(x.hi) <= x.level || level(x.lo) <= x.level) return false;
    const std::uint64_t key = (static_cast<std::uint64_t>(x.level) << 42) ^
                              (static_cast<std::uint64_t>(x.hi) << 21) ^ x.lo;
    if (++seen[key] > 1) {
      for (std::uint32_t m = 2; m < n; ++m) {
        const Node& y = nodes_[m];
        if (y.level == x.level && y.hi == x.hi && y.lo == x.lo) return false;
      }
    }
  }
  return true;
}

}  // namespace tkc
