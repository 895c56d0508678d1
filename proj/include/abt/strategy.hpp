#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "abt/position.hpp"

namespace abt {

class Strategy;
using StrategyPtr = std::shared_ptr<const Strategy>;

// One opponent branch under a player move. `binders` is the η binder-count
// superscript (λ-block width of the subtree root); -1 when unannotated.
struct Branch {
  Move key;
  int binders = -1;
  StrategyPtr sub;
};

// Lazy branch family (numeral-keyed Pcf/CBV children, ludics fields):
// only finitely many keys are ever demanded, so subtrees are produced on
// request and memoized. Generators must be pure.
using BranchGen = std::function<std::optional<Branch>(const Move&)>;

// A strategy node: the unique player answer to the query above it plus
// the opponent branches below it. Trees are immutable after construction.
class Strategy {
 public:
  Move player;
  Pointer ptr;
  int arity = -1;  // η argument-count superscript; -1 when unannotated

  Strategy(Move p, Pointer k, std::vector<Branch> kids = {},
           BranchGen gen = nullptr, int arity = -1);

  const std::vector<Branch>& kids() const { return kids_; }
  bool has_gen() const { return static_cast<bool>(gen_); }

  // Branch lookup, materializing generated children on first demand.
  const Branch* child(const Move& key) const;

 private:
  std::vector<Branch> kids_;  // sorted by key
  BranchGen gen_;
  mutable std::map<Move, std::optional<Branch>> cache_;
  mutable std::mutex mu_;
};

StrategyPtr make_node(Move p, Pointer k, std::vector<Branch> kids = {},
                      BranchGen gen = nullptr, int arity = -1);

// A strategy together with the binder count of its root block (the η
// superscript of • resp. of a renamed counter-strategy root).
struct Rooted {
  StrategyPtr tree;
  int root_binders = -1;
};

// ψ = [a1 <- φ1, ..., an <- φn], plus an optional generator for infinite
// entry families (ludics counter-designs). Copies share the memo cache;
// generators are pure, so that is observationally irrelevant.
struct CounterStrategy {
  std::map<Move, Rooted> entries;
  std::function<std::optional<Rooted>(const Move&)> gen;

  const Rooted* entry(const Move& name) const;
  bool has(const Move& name) const { return entry(name) != nullptr; }

 private:
  struct Cache {
    std::map<Move, std::optional<Rooted>> memo;
    std::mutex mu;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// φ as a partial function from queries to player moves: walk the
// tree along the opponent move names of q; player moves are irrelevant.
// path[0] must be • (and is skipped; the root node answers it).
const Strategy* walk(const Rooted& root, const std::vector<Move>& path);

// lookup(φ, q): the answer to a query position, or nullopt.
std::optional<std::pair<Move, Pointer>> lookup(const Rooted& phi, Pos q);

// Structural equality on finite trees; generators are not compared (a
// node owning one participates only through materialized children).
bool tree_equal(const StrategyPtr& a, const StrategyPtr& b,
                bool compare_annotations = false);

// Invariant checks: strict alternation is structural, so only
// pointer validity and determinism-by-construction remain.
// Every Bound(i) must have an opponent block at that height.
bool pointers_valid(const Rooted& r);

}  // namespace abt
