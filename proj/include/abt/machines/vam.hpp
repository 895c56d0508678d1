#pragma once

#include "abt/machines/common.hpp"

namespace abt {

// VAM state items: plays are sequences of moves; jump items <a,m*>
// record where the view of the new opponent move continues.
struct VamItem {
  enum class Kind { bullet, player, bare, jump };
  Kind kind = Kind::bullet;
  Stage stage;
  Move move;
  Pointer ptr;       // player items
  long jump_to = 0;  // jump items: the starred stage m of <a,m*>
  std::string rule;
};

struct VamState {
  std::vector<VamItem> items;
  const VamItem* at(Stage s) const {
    auto i = s.index();
    return i < items.size() ? &items[i] : nullptr;
  }
};

struct VamRun {
  VamState state;
  Termination term;
};

// jump_i(Γ, n): resolve a pointer by stage arithmetic (i jumps from the
// plain stage n). Returns the landing plain stage; 1 means the root.
long vam_jump(const VamState& s, long i, long n);

// view(Γ, n): the reconstructed position of the due strategy at plain
// stage n; multiplexed variant keeps the stamps (= stage numbers).
Pos vam_view(const VamState& s, long n);   // erased (lookup form)
Pos vam_dview(const VamState& s, long n);  // multiplexed (translations)

struct VamOptions {
  long fuel = 100000;
  bool star = false;
};

std::optional<Termination> vam_step(VamState& s, Arena& arena,
                                    const VamOptions& opts = {});
VamRun vam_run(Arena& arena, const VamOptions& opts = {});
VamRun vam_run(const Rooted& phi, const CounterStrategy& psi, long fuel);

}  // namespace abt
