#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tkc/atom.hpp"
#include "tkc/literal.hpp"

namespace tkc {

/// Outcome of a consistency check of a conjunction of atom literals.
struct TheoryVerdict {
  bool sat = false;
  Point witness;       // sat: values of the arithmetic variables
  LiteralSet conflict;  // unsat: subset of the query that is itself unsatisfiable
};

struct ConflictCore {
  LiteralSet literals;
  bool minimal = false;
};

/// `value + k * delta` for an infinitesimal delta > 0.
struct DeltaRational {
  Rational c;
  Rational k;

  DeltaRational() = default;
  DeltaRational(Rational value, Rational eps = 0) : c(std::move(value)), k(std::move(eps)) {}

  friend DeltaRational operator+(const DeltaRational& a, const DeltaRational& b) {
    return {a.c + b.c, a.k + b.k};
  }
  friend DeltaRational operator-(const DeltaRational& a, const DeltaRational& b) {
    return {a.c - b.c, a.k - b.k};
  }
  friend DeltaRational operator*(const DeltaRational& a, const Rational& s) {
    return {a.c * s, a.k * s};
  }
  friend DeltaRational operator/(const DeltaRational& a, const Rational& s) {
    return {a.c / s, a.k / s};
  }
  friend bool operator==(const DeltaRational& a, const DeltaRational& b) {
    return a.c == b.c && a.k == b.k;
  }
  friend bool operator<(const DeltaRational& a, const DeltaRational& b) {
    return a.c < b.c || (a.c == b.c && a.k < b.k);
  }
  friend bool operator<=(const DeltaRational& a, const DeltaRational& b) { return !(b < a); }
  friend bool operator>(const DeltaRational& a, const DeltaRational& b) { return b < a; }
};

/// Column layout of the simplex tableau for the arithmetic atoms of an atom
/// set. Built once and shared between solver instances.
struct LraLayout {
  struct AtomInfo {
    bool linear = false;
    std::size_t column = 0;
    Relation rel = Relation::Le;
    Rational constant;
  };

  std::vector<AtomInfo> atoms;         // indexed by Var, slot 0 unused
  std::vector<std::string> variables;  // columns [0, variables.size())
  std::size_t columns = 0;             // variables followed by slacks
  std::vector<std::vector<Rational>> rows;  // slack rows, dense over columns
  std::vector<std::size_t> rowBasic;        // slack column per row

  static std::shared_ptr<const LraLayout> build(const AtomSet& alpha);
};

/// Incremental decision procedure for conjunctions of literals over
/// {<=, <, =} linear constraints and their negations (general simplex with
/// Bland's rule). Literals over Boolean atoms are accepted and ignored.
///
/// Instances are single-threaded; independent instances may run concurrently.
class LraSolver {
 public:
  explicit LraSolver(std::shared_ptr<const LraLayout> layout);
  explicit LraSolver(const AtomSet& alpha) : LraSolver(LraLayout::build(alpha)) {}

  /// Returns false when the literal clashes with an asserted bound; the
  /// explanation is then in conflict().
  bool assertLiteral(Literal lit);
  /// Full consistency check of everything asserted so far.
  bool check();

  void push();
  void pop();
  std::size_t depth() const { return levels_.size(); }

  const LiteralSet& conflict() const { return conflict_; }
  /// Valid after check() returned true.
  const Point& witness() const { return witness_; }

 private:
  struct Bound {
    DeltaRational value;
    Literal reason;
  };
  struct TrailEntry {
    std::size_t column;
    bool upper;
    std::optional<Bound> old;
  };
  struct Disequality {
    std::size_t column;
    Rational constant;
    Literal reason;
  };

  bool assertUpper(std::size_t col, const DeltaRational& v, Literal reason);
  bool assertLower(std::size_t col, const DeltaRational& v, Literal reason);
  bool simplex();
  bool checkDisequalities();
  void update(std::size_t col, const DeltaRational& v);
  void pivotAndUpdate(std::size_t row, std::size_t col, const DeltaRational& v);
  void pivot(std::size_t row, std::size_t col);
  void computeWitness();
  bool canIncrease(std::size_t col) const;
  bool canDecrease(std::size_t col) const;

  std::shared_ptr<const LraLayout> layout_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::size_t> rowBasic_;
  std::vector<int> basicRow_;
  std::vector<DeltaRational> value_;
  std::vector<std::optional<Bound>> lower_;
  std::vector<std::optional<Bound>> upper_;
  std::vector<TrailEntry> trail_;
  std::vector<Disequality> diseqs_;
  std::vector<std::pair<std::size_t, std::size_t>> levels_;
  LiteralSet conflict_;
  Point witness_;
};

/// Non-incremental consistency oracle over an atom set.
class TheoryBackend {
 public:
  virtual ~TheoryBackend() = default;
  virtual TheoryVerdict checkConjunction(std::span<const Literal> literals) const = 0;
};

/// Exact linear rational arithmetic (Boolean atoms are unconstrained).
class LraBackend final : public TheoryBackend {
 public:
  explicit LraBackend(const AtomSet& alpha) : layout_(LraLayout::build(alpha)) {}
  explicit LraBackend(std::shared_ptr<const LraLayout> layout) : layout_(std::move(layout)) {}
  TheoryVerdict checkConjunction(std::span<const Literal> literals) const override;
  const std::shared_ptr<const LraLayout>& layout() const { return layout_; }

 private:
  std::shared_ptr<const LraLayout> layout_;
};

/// Degenerate theory: only complementary literals conflict.
class BooleanBackend final : public TheoryBackend {
 public:
  TheoryVerdict checkConjunction(std::span<const Literal> literals) const override;
};

TheoryVerdict checkConjunction(const AtomSet& alpha, std::span<const Literal> literals);

/// Deletion-based minimization of an unsatisfiable core, trying literals in
/// descending variable order. Throws Error if `conflict` is satisfiable and
/// std::logic_error if the result is a single literal.
ConflictCore minimizeConflict(const TheoryBackend& backend, std::span<const Literal> literals,
                              std::span<const Literal> conflict);
ConflictCore minimizeConflict(const AtomSet& alpha, std::span<const Literal> literals,
                              std::span<const Literal> conflict);

}  // namespace tkc
