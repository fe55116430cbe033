#include "tkc/formula.hpp"

#include <algorithm>
#include <optional>

#include "tkc/errors.hpp"

namespace tkc {

namespace {

std::vector<std::uint32_t> mergeSupports(const std::vector<FormulaNode>& nodes,
                                         std::span<const FormulaId> kids) {
  std::vector<std::uint32_t> out;
  for (FormulaId k : kids) {
    const auto& s = nodes[k.index].support;
    std::vector<std::uint32_t> merged;
    merged.reserve(out.size() + s.size());
    std::set_union(out.begin(), out.end(), s.begin(), s.end(), std::back_inserter(merged));
    out.swap(merged);
  }
  return out;
}

}  // namespace

std::size_t FormulaStore::KeyHash::operator()(const Key& k) const noexcept {
  std::size_t h = static_cast<std::size_t>(k.op) * 0x9e3779b97f4a7c15ULL;
  h ^= (static_cast<std::size_t>(k.symbol) << 1 | k.positive) + 0x9e3779b9 + (h << 6) + (h >> 2);
  for (FormulaId c : k.kids) h ^= c.index + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

FormulaStore::FormulaStore() {
  make(Op::True, 0, true, {});
  make(Op::False, 0, true, {});
}

FormulaId FormulaStore::make(Op op, std::uint32_t symbol, bool positive,
                             std::vector<FormulaId> kids) {
  Key key{op, symbol, positive, std::move(kids)};
  if (auto it = unique_.find(key); it != unique_.end()) return it->second;
  FormulaNode n;
  n.op = op;
  n.symbol = symbol;
  n.positive = positive;
  n.kids = key.kids;
  if (op == Op::Lit) {
    n.support = {symbol};
  } else {
    n.support = mergeSupports(nodes_, n.kids);
  }
  const FormulaId id{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(std::move(n));
  unique_.emplace(std::move(key), id);
  return id;
}

FormulaId FormulaStore::literal(std::uint32_t symbol, bool positive) {
  return make(Op::Lit, symbol, positive, {});
}

FormulaId FormulaStore::mkNot(FormulaId f) {
  const FormulaNode& n = node(f);
  switch (n.op) {
    case Op::True: return bottom();
    case Op::False: return top();
    case Op::Lit: return literal(n.symbol, !n.positive);
    case Op::Not: return n.kids[0];
    default: return make(Op::Not, 0, true, {f});
  }
}

FormulaId FormulaStore::mkNary(Op op, std::span<const FormulaId> kids) {
  const FormulaId absorbing = op == Op::And ? bottom() : top();
  const FormulaId neutral = op == Op::And ? top() : bottom();
  std::vector<FormulaId> flat;
  flat.reserve(kids.size());
  for (FormulaId k : kids) {
    if (k == absorbing) return absorbing;
    if (k == neutral) continue;
    if (node(k).op == op) {
      const auto& inner = node(k).kids;
      flat.insert(flat.end(), inner.begin(), inner.end());
    } else {
      flat.push_back(k);
    }
  }
  if (flat.empty()) return neutral;
  if (flat.size() == 1) return flat.front();
  return make(op, 0, true, std::move(flat));
}

FormulaId FormulaStore::mkAnd(std::span<const FormulaId> kids) { return mkNary(Op::And, kids); }
FormulaId FormulaStore::mkOr(std::span<const FormulaId> kids) { return mkNary(Op::Or, kids); }

FormulaId FormulaStore::mkAnd(FormulaId a, FormulaId b) {
  const FormulaId kids[] = {a, b};
  return mkAnd(kids);
}

FormulaId FormulaStore::mkOr(FormulaId a, FormulaId b) {
  const FormulaId kids[] = {a, b};
  return mkOr(kids);
}

FormulaId FormulaStore::mkIff(FormulaId a, FormulaId b) {
  if (a == top()) return b;
  if (b == top()) return a;
  if (a == bottom()) return mkNot(b);
  if (b == bottom()) return mkNot(a);
  return make(Op::Iff, 0, true, {a, b});
}

FormulaId FormulaStore::mkImplies(FormulaId a, FormulaId b) {
  if (a == bottom() || b == top()) return top();
  if (a == top()) return b;
  if (b == bottom()) return mkNot(a);
  return make(Op::Implies, 0, true, {a, b});
}

bool FormulaStore::mentions(FormulaId f, std::uint32_t symbol) const {
  const auto& s = node(f).support;
  return std::binary_search(s.begin(), s.end(), symbol);
}

bool FormulaStore::isNnf(FormulaId root) const {
  std::vector<FormulaId> stack{root};
  std::vector<bool> seen(nodes_.size(), false);
  while (!stack.empty()) {
    FormulaId f = stack.back();
    stack.pop_back();
    if (seen[f.index]) continue;
    seen[f.index] = true;
    const FormulaNode& n = node(f);
    if (n.op == Op::Not || n.op == Op::Iff || n.op == Op::Implies) return false;
    for (FormulaId k : n.kids) stack.push_back(k);
  }
  return true;
}

FormulaId FormulaStore::nnf(FormulaId f, bool positive,
                            std::unordered_map<std::uint64_t, FormulaId>& memo) {
  const std::uint64_t key = (static_cast<std::uint64_t>(f.index) << 1) | (positive ? 1 : 0);
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  // Copy what we need: make() may reallocate nodes_.
  const Op op = node(f).op;
  const std::vector<FormulaId> kids = node(f).kids;
  FormulaId result;
  switch (op) {
    case Op::True:
      result = positive ? top() : bottom();
      break;
    case Op::False:
      result = positive ? bottom() : top();
      break;
    case Op::Lit:
      result = positive ? f : literal(node(f).symbol, !node(f).positive);
      break;
    case Op::Not:
      result = nnf(kids[0], !positive, memo);
      break;
    case Op::And:
    case Op::Or: {
      std::vector<FormulaId> out;
      out.reserve(kids.size());
      for (FormulaId k : kids) out.push_back(nnf(k, positive, memo));
      const bool conj = (op == Op::And) == positive;
      result = conj ? mkAnd(out) : mkOr(out);
      break;
    }
    case Op::Implies: {
      // a -> b == !a | b
      FormulaId na = nnf(kids[0], false, memo);
      FormulaId b = nnf(kids[1], true, memo);
      if (positive) {
        result = mkOr(na, b);
      } else {
        result = mkAnd(nnf(kids[0], true, memo), nnf(kids[1], false, memo));
      }
      break;
    }
    case Op::Iff: {
      FormulaId a = nnf(kids[0], true, memo);
      FormulaId na = nnf(kids[0], false, memo);
      FormulaId b = nnf(kids[1], true, memo);
      FormulaId nb = nnf(kids[1], false, memo);
      if (positive) {
        result = mkOr(mkAnd(a, b), mkAnd(na, nb));
      } else {
        result = mkOr(mkAnd(a, nb), mkAnd(na, b));
      }
      break;
    }
  }
  memo.emplace(key, result);
  return result;
}

FormulaId FormulaStore::toNnf(FormulaId f) {
  std::unordered_map<std::uint64_t, FormulaId> memo;
  return nnf(f, true, memo);
}

FormulaId FormulaStore::negate(FormulaId f) {
  std::unordered_map<std::uint64_t, FormulaId> memo;
  return nnf(f, false, memo);
}

template <class Lookup>
FormulaId FormulaStore::residualImpl(FormulaId f, const Lookup& lookup,
                                     std::unordered_map<std::uint32_t, FormulaId>& memo) {
  if (auto it = memo.find(f.index); it != memo.end()) return it->second;
  const Op op = node(f).op;
  FormulaId result = f;
  if (op == Op::Lit) {
    if (auto v = lookup(node(f).symbol)) result = (*v == node(f).positive) ? top() : bottom();
  } else if (op != Op::True && op != Op::False) {
    bool touched = false;
    for (std::uint32_t s : node(f).support) {
      if (lookup(s)) {
        touched = true;
        break;
      }
    }
    if (touched) {
      const std::vector<FormulaId> kids = node(f).kids;
      std::vector<FormulaId> out;
      out.reserve(kids.size());
      for (FormulaId k : kids) out.push_back(residualImpl(k, lookup, memo));
      switch (op) {
        case Op::Not: result = mkNot(out[0]); break;
        case Op::And: result = mkAnd(out); break;
        case Op::Or: result = mkOr(out); break;
        case Op::Iff: result = mkIff(out[0], out[1]); break;
        case Op::Implies: result = mkImplies(out[0], out[1]); break;
        default: break;
      }
    }
  }
  memo.emplace(f.index, result);
  return result;
}

FormulaId FormulaStore::residual(FormulaId f, const Valuation& valuation) {
  std::unordered_map<std::uint32_t, FormulaId> memo;
  auto lookup = [&](std::uint32_t s) -> std::optional<bool> {
    auto it = valuation.find(s);
    if (it == valuation.end()) return std::nullopt;
    return it->second;
  };
  return residualImpl(f, lookup, memo);
}

FormulaId FormulaStore::residual(FormulaId f, std::uint32_t symbol, bool value) {
  if (!mentions(f, symbol)) return f;
  std::unordered_map<std::uint32_t, FormulaId> memo;
  auto lookup = [&](std::uint32_t s) -> std::optional<bool> {
    if (s == symbol) return value;
    return std::nullopt;
  };
  return residualImpl(f, lookup, memo);
}

FormulaId FormulaStore::import(const FormulaStore& from, FormulaId root,
                               const std::function<std::uint32_t(std::uint32_t)>& rename) {
  std::unordered_map<std::uint32_t, FormulaId> memo;
  std::function<FormulaId(FormulaId)> go = [&](FormulaId f) -> FormulaId {
    if (auto it = memo.find(f.index); it != memo.end()) return it->second;
    const FormulaNode& n = from.node(f);
    FormulaId r;
    switch (n.op) {
      case Op::True: r = top(); break;
      case Op::False: r = bottom(); break;
      case Op::Lit: r = literal(rename(n.symbol), n.positive); break;
      default: {
        std::vector<FormulaId> kids;
        kids.reserve(n.kids.size());
        for (FormulaId k : n.kids) kids.push_back(go(k));
        switch (n.op) {
          case Op::Not: r = mkNot(kids[0]); break;
          case Op::And: r = mkAnd(kids); break;
          case Op::Or: r = mkOr(kids); break;
          case Op::Iff: r = mkIff(kids[0], kids[1]); break;
          default: r = mkImplies(kids[0], kids[1]); break;
        }
      }
    }
    memo.emplace(f.index, r);
    return r;
  };
  return go(root);
}

std::size_t FormulaStore::dagSize(FormulaId root) const {
  std::vector<FormulaId> stack{root};
  std::vector<bool> seen(nodes_.size(), false);
  std::size_t count = 0;
  while (!stack.empty()) {
    FormulaId f = stack.back();
    stack.pop_back();
    if (seen[f.index]) continue;
    seen[f.index] = true;
    ++count;
    for (FormulaId k : node(f).kids) stack.push_back(k);
  }
  return count;
}

bool FormulaStore::evaluate(FormulaId root, const std::function<bool(std::uint32_t)>& value) const {
  std::unordered_map<std::uint32_t, bool> memo;
  std::function<bool(FormulaId)> go = [&](FormulaId f) -> bool {
    if (auto it = memo.find(f.index); it != memo.end()) return it->second;
    const FormulaNode& n = node(f);
    bool r = false;
    switch (n.op) {
      case Op::True: r = true; break;
      case Op::False: r = false; break;
      case Op::Lit: r = value(n.symbol) == n.positive; break;
      case Op::Not: r = !go(n.kids[0]); break;
      case Op::And:
        r = true;
        for (FormulaId k : n.kids) {
          if (!go(k)) {
            r = false;
            break;
          }
        }
        break;
      case Op::Or:
        r = false;
        for (FormulaId k : n.kids) {
          if (go(k)) {
            r = true;
            break;
          }
        }
        break;
      case Op::Iff: r = go(n.kids[0]) == go(n.kids[1]); break;
      case Op::Implies: r = !go(n.kids[0]) || go(n.kids[1]); break;
    }
    memo.emplace(f.index, r);
    return r;
  };
  return go(root);
}

}  // namespace tkc
