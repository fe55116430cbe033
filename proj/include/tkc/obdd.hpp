#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "tkc/ddnnf.hpp"
#include "tkc/formula.hpp"
#include "tkc/literal.hpp"

namespace tkc {

/// Node handle tagged with the id of its manager.
struct ObddRef {
  std::uint32_t manager = 0;
  std::uint32_t node = 0;
  friend constexpr auto operator<=>(const ObddRef&, const ObddRef&) = default;
};

enum class BddOp : std::uint8_t { And, Or, Xor, Implies };

/// Reduced ordered BDDs without complement edges. Node 0 is the false
/// terminal and node 1 the true terminal; B-equivalent functions built in one
/// manager share a handle.
///
/// Single-writer while building; a manager that is no longer extended may be
/// read concurrently.
class ObddManager {
 public:
  /// `order[i]` is the variable tested at level i.
  explicit ObddManager(std::vector<Var> order);

  std::uint32_t id() const { return id_; }
  const std::vector<Var>& order() const { return order_; }

  ObddRef bottom() const { return {id_, 0}; }
  ObddRef top() const { return {id_, 1}; }
  ObddRef variable(Var v, bool positive = true);

  ObddRef apply(BddOp op, ObddRef a, ObddRef b);
  ObddRef negate(ObddRef a);
  ObddRef ite(ObddRef c, ObddRef t, ObddRef e);

  /// Canonical OBDD of a propositional formula. Throws Error if a variable
  /// is not in the order.
  ObddRef fromFormula(const FormulaStore& store, FormulaId f);
  /// Rebuilds an OBDD from any NNF DAG over ordered variables.
  ObddRef fromDdnnf(const DdnnfGraph& graph, DdnnfRef root);
  /// Each internal node becomes a decision node.
  DdnnfRef toDdnnf(ObddRef root, DdnnfGraph& graph) const;

  bool equal(ObddRef a, ObddRef b) const;
  bool entails(ObddRef a, ObddRef b);

  bool isTerminal(ObddRef r) const { return r.node < 2; }
  Var var(ObddRef r) const { return order_[nodes_[r.node].level]; }
  ObddRef hi(ObddRef r) const { return {id_, nodes_[r.node].hi}; }
  ObddRef lo(ObddRef r) const { return {id_, nodes_[r.node].lo}; }

  /// Internal nodes reachable from root.
  std::size_t nodeCount(ObddRef root) const;
  std::size_t tableSize() const { return nodes_.size(); }

  /// One line per internal node: `id var hiId loId` (terminals are 0 and 1).
  std::string exportGraph(ObddRef root) const;

  /// Ordering along edges, no redundant node, unique-table integrity.
  bool checkInvariants() const;

 private:
  struct Node {
    std::uint32_t level;
    std::uint32_t hi;
    std::uint32_t lo;
  };

  std::uint32_t make(std::uint32_t level, std::uint32_t hi, std::uint32_t lo);
  std::uint32_t applyRec(BddOp op, std::uint32_t a, std::uint32_t b);
  std::uint32_t negateRec(std::uint32_t a);
  std::uint32_t level(std::uint32_t n) const { return nodes_[n].level; }
  void own(ObddRef r) const;

  std::uint32_t id_;
  std::vector<Var> order_;
  std::unordered_map<Var, std::uint32_t> levelOf_;
  std::vector<Node> nodes_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets_;  // unique table
  std::unordered_map<std::uint64_t, std::uint32_t> applyCache_;
  std::unordered_map<std::uint32_t, std::uint32_t> negateCache_;
};

}  // namespace tkc
