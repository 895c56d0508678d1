#pragma once

#include <deque>
#include <map>

#include "abt/concrete.hpp"
#include "abt/machines/common.hpp"

namespace abt {

// Environments of the EAM. A frame is created when entering a
// closure body: it binds the call site's branches under the closure's
// binder token and chains to the closure's captured environment. The
// bottom frame holds the counter-strategy entries (free lookups) and the
// root binder of the main term (a bound lookup resolving there is the
// machine's answer to the initial query).
struct EamFrame {
  std::string binder;
  const CNode* call = nullptr;  // call-site node providing the branches
  const EamFrame* call_env = nullptr;
  const EamFrame* parent = nullptr;
  bool top = false;
};

struct EamState {
  const CNode* code = nullptr;
  const EamFrame* env = nullptr;
};

struct EamProgram {
  CTree main;
  std::map<Move, CTree> entries;
  // Lazy entry families (the CBV closing clause produces one tree per
  // numeral); memoized, shared across copies.
  std::function<std::optional<CTree>(const Move&)> gen;

  const CTree* entry(const Move& name) const;

 private:
  struct Cache {
    std::map<Move, std::optional<CTree>> memo;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

struct EamRun {
  std::vector<EamState> states;  // state k answers the k-th query (stage k)
  Termination term;
  std::deque<EamFrame> frames;   // owns every frame of the run
  const EamFrame* top = nullptr;
};

struct EamOptions {
  long fuel = 100000;
  bool star = false;  // enter the * branch in place on a [*|_] head
};

EamRun eam_run(const EamProgram& prog, const EamOptions& opts = {});

}  // namespace abt
