#pragma once

#include <memory>
#include <string>
#include <vector>

#include "abt/concrete.hpp"
#include "abt/machines/eam.hpp"

namespace abt::pcf {

// Pcf trees: B ::= (λ~x.P), P ::= case y B1..Bn [n1 => B'1, ...]
// with pairwise distinct constants. A bare head is a case with no arms.
struct Tree;
using TreePtr = std::shared_ptr<const Tree>;

struct Head {
  bool is_const = false;
  std::string cst;  // tt / ff / digits
  std::string var;
};

struct Tree {
  std::vector<std::string> binders;
  Head head;
  std::vector<TreePtr> args;
  std::vector<std::pair<std::string, TreePtr>> arms;  // constant -> B
};

struct Parsed {
  TreePtr term;
  std::vector<std::pair<std::string, TreePtr>> env;
};

Parsed parse(const std::string& text);

// Pcf translation. Variables point to their binder block; constants to
// their return address (the nearest enclosing value root).
CTree compile(const TreePtr& t, bool annotate = false);

struct Compiled {
  Rooted phi;
  CounterStrategy psi;
  EamProgram eam;
};
Compiled compile_program(const Parsed& p, bool annotate = false);

}  // namespace abt::pcf
