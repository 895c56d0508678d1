#pragma once

#include <cstdint>

#include "abt/machines/eam.hpp"
#include "abt/machines/gam.hpp"
#include "abt/machines/sam.hpp"
#include "abt/machines/vam.hpp"

namespace abt {

// Machine-state translations. All of them are defined on reachable
// states only; a clause mismatch throws Unreachable.

// VAM <-> GAM.
GamState vam_to_gam(const VamState& v);
VamState gam_to_vam(const GamState& g);

// GAM <-> SAM: the nested state of every stage, the inverse ledger
// reconstruction, and the step number assignment #.
std::vector<SamState> gam_to_sam(const GamState& g);
GamState sam_to_gam(const SamState& s);
Stage sam_step_number(const SamState& s);

// SAM -> EAM: build the expected EAM state of a SAM query, mirroring
// the machine's environment construction; trad_ac reconstructs the code
// and binder list of a position.
struct SpecEnv;
using SpecEnvPtr = std::shared_ptr<const SpecEnv>;
struct SpecEnv {
  bool top = false;
  std::string binder;
  const CNode* call = nullptr;
  SpecEnvPtr call_env;
  SpecEnvPtr parent;
};
struct SpecEamState {
  const CNode* code = nullptr;
  SpecEnvPtr env;
};

SpecEamState sam_to_eam(const SamQPtr& q, const EamProgram& prog);
bool spec_env_matches(const SpecEnvPtr& s, const EamFrame* f);

struct AcResult {
  const CNode* code = nullptr;
  std::vector<std::string> binders;  // the list L, innermost first
};
// ⟦·⟧^ac on an erased position (query or response).
AcResult trad_ac(Pos position, const EamProgram& prog);

// ---------------------------------------------------------------------
// Lock-step checking

struct Divergence {
  Stage stage;
  std::string where;
  std::string detail;
};

struct CaseReport {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<Divergence> divergences;
  Stage halt_stage;
  long stages = 0;
  bool ok() const { return divergences.empty(); }
};

struct LockstepOptions {
  long fuel = 100000;
  bool star = false;
  bool eta = false;  // η variants of the ledger machines (EAM excluded)
  bool with_vam = true;
  bool with_sam = true;
  bool with_eam = true;
};

CaseReport check_lockstep(const std::string& name, const Rooted& phi,
                          const CounterStrategy& psi, const EamProgram& eam,
                          const LockstepOptions& opts = {});

// Negative control: compare a ledger against a (possibly corrupted) copy.
std::vector<Divergence> compare_ledgers(const std::vector<GamItem>& a,
                                        const std::vector<GamItem>& b);

// Random finite strategies for the campaign: uniform tree shapes,
// pointers uniform over valid offsets plus Free with probability 0.2.
struct RandomSpec {
  int max_depth = 6;
  int max_branch = 3;
  double free_prob = 0.2;
};
struct RandomCase {
  Rooted phi;
  CounterStrategy psi;
  EamProgram eam;
};
RandomCase random_case(std::uint64_t seed, const RandomSpec& spec = {});

struct Campaign {
  std::vector<CaseReport> cases;
  bool ok() const {
    for (const auto& c : cases)
      if (!c.ok()) return false;
    return true;
  }
};
Campaign run_campaign(std::uint64_t seed, int count,
                      const RandomSpec& spec = {},
                      const LockstepOptions& opts = {});

}  // namespace abt
