#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "abt/concrete.hpp"
#include "abt/machines/eam.hpp"

namespace abt::lud {

// Ludics designs:
//   M ::= { J = λ{x_j | j∈J}.P_J | J ∈ P_f(ω) }
//   P ::= (x·I){M_i | i∈I} | Ω | ✠
struct Design;
struct LCmd;
using DesignPtr = std::shared_ptr<const Design>;
using LCmdPtr = std::shared_ptr<const LCmd>;

struct Field {
  std::vector<std::string> binders;  // one name per j ∈ J, in J order
  LCmdPtr cmd;
};

struct Design {
  std::map<IndexSet, Field> fields;  // missing fields default to Ω
};

struct LCmd {
  enum class K { apply, omega, daimon } k = K::omega;
  std::string head;
  IndexSet iset;
  std::vector<DesignPtr> actuals;  // one per i ∈ I, in I order
};

struct Parsed {
  LCmdPtr cmd;
  std::vector<std::pair<std::string, DesignPtr>> env;
};

Parsed parse(const std::string& text);

struct Compiled {
  Rooted phi;
  CounterStrategy psi;
  EamProgram eam;
};

// Embedding into abstract Böhm trees: branches are grouped (i,J)
// pairs, bound heads become (j,K) pair moves, Ω and ✠ are terminal free
// player moves, and missing record fields are implicit Ω branches.
Compiled compile_program(const Parsed& p);

// The source reference machine: convergence is reaching ⟨✠,ρ⟩.
struct MachineResult {
  enum class K { converges, diverges, stuck, fuel } k = K::fuel;
  std::string free_head;  // stuck case
  long steps = 0;
};
MachineResult run(const LCmdPtr& c,
                  const std::vector<std::pair<std::string, DesignPtr>>& env,
                  long fuel = 100000);

}  // namespace abt::lud
