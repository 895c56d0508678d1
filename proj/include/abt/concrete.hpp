#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "abt/strategy.hpp"

namespace abt {

// Concrete syntax of abstract Böhm trees: pointers replaced by
// bound variables. A node is a P; the (λx.P) wrapper of each subterm M_b
// lives on the branch as its binder token. Binder tokens are globally
// unique after parsing/compilation.
class CNode;
using CNodePtr = std::shared_ptr<const CNode>;

struct CBranch {
  Move key;
  std::string binder;  // the λ-token of this subterm's root block
  int binders = -1;    // η binder-count superscript
  CNodePtr sub;
};

using CBranchGen = std::function<std::optional<CBranch>(const Move&)>;

class CNode {
 public:
  Move head;
  std::string hbind;  // binder token the head points to; empty = free (_)
  int arity = -1;

  CNode(Move h, std::string hb, std::vector<CBranch> kids = {},
        CBranchGen gen = nullptr, int arity = -1);

  const std::vector<CBranch>& kids() const { return kids_; }
  bool has_gen() const { return static_cast<bool>(gen_); }
  const CBranch* child(const Move& key) const;

 private:
  std::vector<CBranch> kids_;
  CBranchGen gen_;
  mutable std::map<Move, std::optional<CBranch>> cache_;
  mutable std::mutex mu_;
};

CNodePtr make_cnode(Move h, std::string hb, std::vector<CBranch> kids = {},
                    CBranchGen gen = nullptr, int arity = -1);

// A whole concrete term M = (λx.P).
struct CTree {
  std::string root_binder;
  int root_binders = -1;
  CNodePtr root;
};

// Concrete-to-abstract compilation: binder tokens become offsets via
// the binder-list index rules. Throws ScopeError on a token outside L.
Rooted compile_concrete(const CTree& m,
                        const std::vector<std::string>& L = {});

// Inverse renaming for printing and readback; fresh tokens are assigned
// deterministically in preorder (x0, x1, ...). Generated branches keep
// generating on the concrete side.
CTree decompile(const Rooted& phi, const std::string& prefix = "x");

bool ctree_equal(const CTree& a, const CTree& b);

std::string ctree_str(const CTree& m);

}  // namespace abt
