#pragma once

#include <functional>
#include <optional>

#include "abt/machines/common.hpp"

namespace abt {

// Composite positions built by the strong machine: opponent moves carry
// the stage at which the pilot raised them; player moves point by
// address (the stamp of the composite opponent move they answer) or are
// free.
struct CompMove {
  bool player = false;
  Move move;
  long stamp = 0;  // opponent: raise stage; player: address (0 = free)
  bool free_ptr = false;
};
using Composite = std::vector<CompMove>;

std::string composite_str(const Composite& r);

// The pilot of the strong machine: at each !-state it may raise one
// more query under the answer just produced, or stop this branch.
struct Pilot {
  virtual ~Pilot() = default;
  virtual std::optional<Move> raise(const Composite& focus,
                                    const std::vector<Move>& available) = 0;
};

// Scripted pilot: a fixed list of moves, checked eagerly; an illegal
// move aborts with IllegalQuery naming the step.
struct ScriptPilot : Pilot {
  std::vector<Move> script;
  std::size_t next = 0;
  bool strict = true;
  std::optional<Move> raise(const Composite&,
                            const std::vector<Move>&) override;
};

struct CallbackPilot : Pilot {
  std::function<std::optional<Move>(const Composite&,
                                    const std::vector<Move>&)>
      fn;
  std::optional<Move> raise(const Composite& focus,
                            const std::vector<Move>& available) override {
    return fn(focus, available);
  }
};

struct StrongItem {
  Stage stage;
  Pos pos;
  int side = 0;  // 0: φ-side, 1: ψ-side (the figure's owner subscript)
  std::string rule;
  int eta_level = 0;
};

struct StrongRun {
  std::vector<StrongItem> items;
  std::vector<Composite> responses;  // in production order
  enum class End { done, blocked, fuel, illegal } end = End::done;
  std::string note;
};

struct StrongOptions {
  long fuel = 100000;
  // extra moves the pilot may raise beyond the tree's branches (the
  // η/fax alphabet, where dom is extended dynamically)
  std::vector<Move> extra_moves;
};

// Single-path strong run driven by a pilot.
StrongRun strong_run(Arena& arena, Pilot& pilot,
                     const StrongOptions& opts = {});

// Breadth-first exhaustive exploration of every raisable query down to
// `depth` raised queries per composite path. Forks that block simply
// contribute no composite response.
StrongRun strong_run_exhaustive(const Rooted& phi, const CounterStrategy& psi,
                                int depth, const StrongOptions& opts = {});

// Recompile the composite positions into a standard abstract Böhm
// tree; addresses become offset pointers.
Rooted readback_composition(const std::vector<Composite>& responses);

// The ledger of a strong run in GamItem form (for the multiplexed-tree
// renderer shared with the weak machines).
std::vector<GamItem> strong_ledger(const StrongRun& run);

}  // namespace abt
