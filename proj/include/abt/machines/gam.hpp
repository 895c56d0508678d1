#pragma once

#include "abt/machines/common.hpp"

namespace abt {

struct GamOptions {
  long fuel = 100000;
  bool star = false;  // GAM*: merged rules plus (n)_* (single χ)
};

struct GamState {
  std::vector<GamItem> items;
};

// One weak-GAM transition (resp. of the GAM*/GAM_η variants). Returns
// the Termination when no rule fires; otherwise appends one item.
std::optional<Termination> gam_step(GamState& s, Arena& arena,
                                    const GamOptions& opts = {});

GamRun gam_run(Arena& arena, const GamOptions& opts = {});

// Convenience wrappers.
GamRun gam_run(const Rooted& phi, const CounterStrategy& psi, long fuel);
GamRun gam_star_run(const Rooted& chi, long fuel);

struct GamEtaRun {
  GamRun run;
  std::string expanded;  // η-expanded Φ/Ψ in text form
};
GamEtaRun gam_eta_run(const Rooted& phi, const CounterStrategy& psi,
                      long fuel);

// Termination classification: probe whether a state is final and with which of
// the three cases (a copy of the state is stepped once).
Termination classify_termination(const GamState& s, Arena& arena,
                                 const GamOptions& opts = {});
Termination classify_termination(const GamRun& run);

}  // namespace abt
