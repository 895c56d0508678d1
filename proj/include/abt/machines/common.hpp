#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "abt/strategy.hpp"

namespace abt {

// Machine stages 1, 2*, 2, 3*, 3, ... The starred stage n* precedes the
// plain stage n.
struct Stage {
  long n = 0;
  bool star = false;

  static Stage plain(long k) { return Stage{k, false}; }
  static Stage starred(long k) { return Stage{k, true}; }

  Stage next() const { return star ? plain(n) : starred(n + 1); }
  // Ledger index of this stage (stage 1 is index 0).
  std::size_t index() const {
    return star ? static_cast<std::size_t>(2 * n - 3)
                : static_cast<std::size_t>(2 * (n - 1));
  }
  static Stage at_index(std::size_t i) {
    return (i % 2) ? starred(static_cast<long>(i + 3) / 2)
                   : plain(static_cast<long>(i / 2 + 1));
  }
  std::string str() const {
    return std::to_string(n) + (star ? "*" : "");
  }
  friend bool operator==(const Stage& a, const Stage& b) {
    return a.n == b.n && a.star == b.star;
  }
  friend bool operator<(const Stage& a, const Stage& b) {
    return a.n != b.n ? a.n < b.n : (a.star && !b.star);
  }
  friend bool operator<=(const Stage& a, const Stage& b) {
    return a == b || a < b;
  }
};

// The three halting situations of the weak machine, plus fuel
// exhaustion. `at` is the
// last starred stage the machine performed.
struct Termination {
  enum class Kind { answer, free_answer, blocked, fuel };
  Kind kind = Kind::fuel;
  Move move;
  Stage at;
  std::vector<Move> blocked_query;  // opponent path of the unanswered query

  static Termination answer(Move m, Stage s) {
    return {Kind::answer, std::move(m), s, {}};
  }
  static Termination free_answer(Move m, Stage s) {
    return {Kind::free_answer, std::move(m), s, {}};
  }
  static Termination blocked(std::vector<Move> q, Stage s) {
    Termination t{Kind::blocked, Move{}, s, std::move(q)};
    return t;
  }
  static Termination fuel(Stage s) { return {Kind::fuel, Move{}, s, {}}; }

  int exit_code() const { return static_cast<int>(kind); }
  std::string str() const;
  bool same_class(const Termination& o) const {
    if (kind != o.kind) return false;
    if (kind == Kind::answer || kind == Kind::free_answer)
      return move == o.move;
    return true;
  }
};

// η-expansion mode of a run. Numeral queries past a move's arity expand
// by widening the block; the degenerate n1=n2=0 case admits arbitrary
// moves (the copy-cat rule).
enum class EtaMode { off, on };

// The interaction arena: φ plus ψ behind one lookup keyed by a position's
// root move (• -> φ, otherwise the ψ entry of that name). η mode switches
// to a private mutable mirror of the trees which the η rules extend.
class Arena {
 public:
  struct Answer {
    Move move;
    Pointer ptr;
    int eta_level = 0;  // >0: the answering node was created by η rules
  };

  Arena(Rooted phi, CounterStrategy psi, EtaMode eta = EtaMode::off);
  ~Arena();
  Arena(const Arena&) = delete;
  Arena& operator=(const Arena&) = delete;

  // Answer the query whose opponent-name path is `path` (path[0] is • or
  // an entry name). Applies the η rules when enabled; nullopt means the
  // query is outside the strategy's domain.
  std::optional<Answer> answer(const std::vector<Move>& path);

  // Does ψ bind this name? (guard of the free-move rules)
  bool hooked(const Move& name) const;

  // Finite branch keys under the response reached by `path` (the legal
  // queries of the strong machine's pilot). Empty path is invalid.
  std::vector<Move> branch_keys(const std::vector<Move>& path);

  bool eta_enabled() const { return eta_ == EtaMode::on; }

  // Text rendering of the (η-expanded) trees, for the gam_eta_run output.
  std::string render_expanded() const;

  const Rooted& phi() const { return phi_; }
  const CounterStrategy& psi() const { return psi_; }

 private:
  struct Mut;  // mutable mirror node
  Rooted phi_;
  CounterStrategy psi_;
  EtaMode eta_;
  std::unique_ptr<Mut> mphi_;
  mutable std::map<Move, std::unique_ptr<Mut>> mpsi_;
  Mut* mut_root(const Move& name);
};

// One ledger item of the GAM (and of its star/η variants): the position
// fed in Γ at `stage`.
struct GamItem {
  Stage stage;
  Pos pos;
  std::string rule;
  long target = 0;     // pop landing stamp m for the (n)_b rules
  int eta_level = 0;   // η level of the answering node (starred items)
};

struct GamRun {
  std::vector<GamItem> items;
  Termination term;
  const GamItem* at(Stage s) const {
    auto i = s.index();
    return i < items.size() ? &items[i] : nullptr;
  }
  Stage last_stage() const {
    return items.empty() ? Stage{} : items.back().stage;
  }
  long max_stamp() const;
};

// Multiplexed trees Φ/Ψ reconstructed from a ledger: one tree per
// visited root copy, grouped by the root move name, answers attached to
// the opponent nodes they follow.
struct MNode {
  Move move;
  long stamp = 0;
  bool answered = false;
  Move amove;
  Pointer aptr;
  int eta_level = 0;
  std::vector<MNode> kids;
};

struct MTrees {
  // Key • holds the φ tree; other keys hold the copies of each ψ entry.
  std::map<Move, std::vector<MNode>> roots;
};

MTrees build_mtrees(const std::vector<GamItem>& items);
MTrees build_mtrees_upto(const std::vector<GamItem>& items, Stage cutoff);
bool mtrees_equal(const MTrees& a, const MTrees& b,
                  bool compare_eta = false);
std::string render_mtrees(const MTrees& t);
std::vector<long> opp_stamps(const MTrees& t, const Move& root);

std::string render_trace(const GamRun& run);

}  // namespace abt
