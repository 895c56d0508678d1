#pragma once

#include <string>
#include <utility>
#include <vector>

#include "abt/strategy.hpp"

namespace abt {

// Canonical textual strategy format (s-expression style), used by the CLI
// and golden-trace files:
//
//   node     ::= '(' pmove ptr branch* ')'
//   branch   ::= '(' omove node ')'
//   pmove    ::= move ['^' nat]          (arity superscript)
//   omove    ::= move ['^' nat]          (binder-count superscript)
//   ptr      ::= '_' | nat
//   strategy ::= node | '(' '^' nat node ')'   (root binder count)
//
// Moves: '•' | nat | tt | ff | '#'nat | ident | '*' | 'Ω' | '✠'
//        | ?• | ?n | !• | !n | (?•,x) | (?n,x) | (!n,x) | (!•,x)
//        | j.{K} | x.{I}
//
// A program file is a strategy followed by optional bindings:
//   program  ::= strategy [ '[' entry (',' entry)* ']' ]
//   entry    ::= move ['^' nat] '<-' strategy

std::string strategy_str(const Rooted& phi);
std::string counter_str(const CounterStrategy& psi);

Rooted parse_strategy(const std::string& text);

struct Program {
  Rooted phi;
  CounterStrategy psi;
};
Program parse_program(const std::string& text);

}  // namespace abt
