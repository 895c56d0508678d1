#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "abt/concrete.hpp"
#include "abt/machines/eam.hpp"

namespace abt::mu {

// Classical Pcf trees (λμ-style control):
//   M ::= (λ~x.μβ.c)
//   c ::= case x ~M [~n -> ~c] | [α]n
struct MTerm;
struct Cmd;
using MTermPtr = std::shared_ptr<const MTerm>;
using CmdPtr = std::shared_ptr<const Cmd>;

struct MTerm {
  std::vector<std::string> binders;
  std::string mu;
  CmdPtr body;
};

struct Cmd {
  enum class K { kase, ret } k = K::ret;
  // case x ~M [~n -> ~c]
  std::string var;
  std::vector<MTermPtr> args;
  std::vector<std::pair<long, CmdPtr>> arms;
  // [α]n
  std::string cont;
  long value = 0;
};

struct Parsed {
  CmdPtr cmd;
  std::vector<std::pair<std::string, MTermPtr>> env;
};

Parsed parse(const std::string& text);

// Translation: argument branches are ?i, value branches !n; [α]n
// becomes a player move pointing at α's binder block, or the free pair
// (!n,α) when α is unbound.
CTree compile(const MTermPtr& m);
CTree compile_cmd(const CmdPtr& c);

struct Compiled {
  Rooted phi;
  CounterStrategy psi;
  EamProgram eam;
};
Compiled compile_program(const Parsed& p);

// The source reference machine. Halts on a command whose head name is
// unbound, reporting it as an observable.
struct MachineResult {
  enum class K { observable, fuel } k = K::fuel;
  std::string name;            // the free x or α met
  std::optional<long> value;   // payload of [α]n
  long steps = 0;
  CmdPtr final;
};
MachineResult run(const CmdPtr& c,
                  const std::vector<std::pair<std::string, MTermPtr>>& env,
                  long fuel = 100000);

}  // namespace abt::mu
