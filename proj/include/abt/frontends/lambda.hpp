#pragma once

#include <memory>
#include <string>
#include <vector>

#include "abt/concrete.hpp"
#include "abt/machines/eam.hpp"

namespace abt::lam {

// λ-terms. Normal forms follow the Böhm-tree grammar B ::= (λx1..xm.P),
// P ::= y B1..Bn; general terms (for the * pipeline) allow any redex.
struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class K { var, lam, app } k = K::var;
  std::string name;                  // var
  std::vector<std::string> binders;  // lam
  TermPtr body;                      // lam
  TermPtr fn, arg;                   // app
};

TermPtr var(std::string name);
TermPtr lam(std::vector<std::string> binders, TermPtr body);
TermPtr app(TermPtr fn, TermPtr arg);
TermPtr apps(TermPtr fn, const std::vector<TermPtr>& args);

bool is_normal(const TermPtr& t);
std::string term_str(const TermPtr& t);

// A term plus the (flattened) counter bindings of the nested
// `t [x <- t1, ...]` form.
struct Parsed {
  TermPtr term;
  std::vector<std::pair<std::string, TermPtr>> env;
};

Parsed parse(const std::string& text);
TermPtr parse_term(const std::string& text);

enum class Mode { bohm, bohm_eta, star };

// Böhm-tree translation (Mode::bohm), its arity-annotated variant for
// the GAM_η (Mode::bohm_eta), and the *-indirection compilation of
// general terms (Mode::star). NotNormalForm when bohm modes meet a redex.
CTree compile_bohm(const TermPtr& t, Mode mode = Mode::bohm);
CTree compile_lambda_star(const TermPtr& t);

struct Compiled {
  Rooted phi;
  CounterStrategy psi;
  EamProgram eam;
};
Compiled compile_program(const Parsed& p, Mode mode = Mode::bohm);

// Source-level reference machine: normal-order β-normalization with
// capture-avoiding substitution. Throws StuckState when fuel runs out.
TermPtr normalize(const TermPtr& t, long fuel = 100000);

// Head observable of a normal form, in machine terms: a free head
// variable gives the move itself; a head bound by the top λ-block gives
// its numeral index (the answer-at-the-root case).
Move head_observable(const TermPtr& nf);

}  // namespace abt::lam
