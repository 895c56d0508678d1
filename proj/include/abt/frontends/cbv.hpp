#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "abt/concrete.hpp"
#include "abt/machines/eam.hpp"

namespace abt::cbv {

// Simple types σ ::= ι | σ→σ (plus the command type ⊥, kept implicit).
struct Type;
using TypePtr = std::shared_ptr<const Type>;
struct Type {
  bool base = true;
  TypePtr from, to;
};
TypePtr nat();
TypePtr arrow(TypePtr a, TypePtr b);
bool type_equal(const TypePtr& a, const TypePtr& b);
std::string type_str(const TypePtr& t);

// Classical call-by-value Böhm trees:
//   V ::= λ(z:σ,β).c | n | x | (V + V)
//   c ::= let x:τ = yV in c | case x [~n -> ~c] | [α]V
struct Val;
struct Cmd;
using ValPtr = std::shared_ptr<const Val>;
using CmdPtr = std::shared_ptr<const Cmd>;

struct Val {
  enum class K { abs, num, var, add } k = K::num;
  std::string z;
  TypePtr zty;
  std::string beta;
  CmdPtr body;
  long n = 0;
  std::string x;
  ValPtr lhs, rhs;
};

struct Cmd {
  enum class K { let, kase, ret } k = K::ret;
  // let x:τ = y V in c
  std::string x;
  TypePtr xty;
  std::string y;
  ValPtr v;
  CmdPtr rest;
  // case x [~n -> ~c]
  std::string scrut;
  std::vector<std::pair<long, CmdPtr>> arms;
  // [α]V
  std::string alpha;
};

struct Parsed {
  CmdPtr cmd;
  std::vector<std::pair<std::string, ValPtr>> env;  // closing substitution
};

Parsed parse(const std::string& text);

// Typing over ι and arrow types, commands at ⊥, plus the μ̃ rule for
// let continuations. Throws TypeError naming the violated rule.
TypePtr typecheck_val(const ValPtr& v, std::map<std::string, TypePtr> gamma,
                      std::map<std::string, TypePtr> delta);
void typecheck_cmd(const CmdPtr& c, std::map<std::string, TypePtr> gamma,
                   std::map<std::string, TypePtr> delta);
void typecheck_program(const Parsed& p);

struct Compiled {
  Rooted phi;
  CounterStrategy psi;
  EamProgram eam;
};

// Call-by-value translation, including the closing clause that turns
// the function-typed substitution entries into counter-strategy trees
// keyed by (?payload, x) moves. In call-by-value it is Player who
// starts: the compiled root is the command's first move.
Compiled compile_program(const Parsed& p);

// The source reference machine. Delivered observable: a [α]V on an
// unbound α.
struct MachineResult {
  enum class K { observable, fuel } k = K::fuel;
  std::string cont;
  std::optional<long> value;  // numeral result when V resolves to one
  long steps = 0;
};
MachineResult run(const CmdPtr& c,
                  const std::vector<std::pair<std::string, ValPtr>>& env,
                  long fuel = 100000);

}  // namespace abt::cbv
