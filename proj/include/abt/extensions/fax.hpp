#pragma once

#include "abt/extensions/strong.hpp"
#include "abt/machines/gam.hpp"

namespace abt {

// Copy-cat (fax) strategy over an alphabet, expanded to a fixed depth:
// depth 0 is the bare variable ([name|_]{}); each level answers every
// move b of the alphabet by [b|1] (identity by η-expansion).
Rooted fax(const Move& name, const std::vector<Move>& alphabet, int depth);

// Böhm separation of xy and x(xy) through Joly's context, run on the
// GAM_η, with the reduction chains of the source terms as the oracle.
struct SeparationReport {
  Termination term_y;   // P ≡ y
  Termination term_xy;  // P ≡ xy
  long final_stamp_y = 0;
  long final_stamp_xy = 0;
  Move oracle_y;   // β-normal form of the source context at P ≡ y
  Move oracle_xy;  // ... at P ≡ xy
  GamRun run_y;
  GamRun run_xy;
};

SeparationReport separation_suite(long fuel = 100000);

}  // namespace abt
