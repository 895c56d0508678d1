#pragma once

#include <variant>

#include "abt/machines/common.hpp"

namespace abt {

// SAM nested positions: self-contained, history-free. Opponent
// moves carry the response they were launched from instead of a stamp.
struct SamQ;
struct SamR;
using SamQPtr = std::shared_ptr<const SamQ>;
using SamRPtr = std::shared_ptr<const SamR>;

struct SamQ {
  // • | <a,ann> | prefix <a,ann>
  bool bullet = false;
  SamRPtr prefix;  // null for both root forms
  Move move;
  SamRPtr ann;
};

struct SamR {
  SamQPtr q;
  Move move;
  Pointer ptr;
};

SamQPtr sam_bullet();
SamQPtr sam_open(Move a, SamRPtr ann);                 // <a,ann>
SamQPtr sam_extend(SamRPtr prefix, Move a, SamRPtr ann);
SamRPtr sam_answer(SamQPtr q, Move a, Pointer k);

using SamState = std::variant<SamQPtr, SamRPtr>;

bool sam_equal(const SamState& a, const SamState& b);
std::vector<Move> sam_opp_path(const SamQPtr& q);
Pos sam_erase(const SamState& s);  // underlying plain position
std::string sam_str(const SamState& s);

// dnumber on nested queries: the annotation of the last opponent move;
// nullopt on • (the answer-at-the-root halt).
std::optional<SamRPtr> sam_dnumber(const SamQPtr& q);
SamQPtr sam_pop(const SamQPtr& q);
SamQPtr sam_pop_n(const SamQPtr& q, long i);

struct SamStep {
  Stage stage;
  SamState state;
  std::string rule;
};

struct SamRun {
  std::vector<SamStep> steps;
  Termination term;
  const SamStep* at(Stage s) const {
    auto i = s.index();
    return i < steps.size() ? &steps[i] : nullptr;
  }
};

struct SamOptions {
  long fuel = 100000;
  bool star = false;
};

std::optional<Termination> sam_step(std::vector<SamStep>& steps,
                                    Arena& arena,
                                    const SamOptions& opts = {});
SamRun sam_run(Arena& arena, const SamOptions& opts = {});
SamRun sam_run(const Rooted& phi, const CounterStrategy& psi, long fuel);

}  // namespace abt
