#include "abt/extensions/fax.hpp"

#include "abt/frontends/lambda.hpp"

namespace abt {

namespace {
StrategyPtr copycat(const Move& answer, Pointer ptr,
                    const std::vector<Move>& alphabet, int depth) {
  std::vector<Branch> kids;
  if (depth > 0)
    for (const Move& b : alphabet)
      kids.push_back(Branch{b, -1, copycat(b, Pointer::bound(1), alphabet,
                                           depth - 1)});
  return make_node(answer, ptr, std::move(kids));
}
}  // namespace

Rooted fax(const Move& name, const std::vector<Move>& alphabet, int depth) {
  return Rooted{copycat(name, Pointer::free(), alphabet, depth), -1};
}

namespace {

// Joly's auxiliary terms; the separating context is
// [.][x <- (λx.0, λx.x)_3, y <- 1] R S 0 1 Ω ✠ with R = λz.1, S = 0.
const char* joly_source(const char* p_body) {
  static std::string buf;
  buf = std::string("z (\\r1 r2 r3. r2) (\\s1 s2. s2) (\\o1 o2. o2) "
                    "(\\i1 i2. i1) Omega Daimon "
                    "[z <- ") +
        p_body +
        " [x <- \\q1 q2 q3 qz. qz (a q1 q2 q3) (b q1 q2 q3) "
        "[a <- \\ax u1 u2. u2, b <- \\bx. bx], y <- \\j1 j2. j1]]";
  return buf.c_str();
}

// The source oracle: the same context as a pure λ-term, β-normalized.
lam::TermPtr joly_pure(const char* p_body) {
  // (M,N)_3 = λ y1 y2 y3 z. z (M y1 y2 y3) (N y1 y2 y3)
  std::string q =
      "(\\q1 q2 q3 qz. qz ((\\ax u1 u2. u2) q1 q2 q3) "
      "((\\bx. bx) q1 q2 q3))";
  std::string src = std::string("(\\z. z (\\r1 r2 r3. r2) (\\s1 s2. s2) "
                                "(\\o1 o2. o2) (\\i1 i2. i1) Omega Daimon) "
                                "((\\x y. ") +
                    p_body + ") " + q + " (\\j1 j2. j1))";
  return lam::parse_term(src);
}

}  // namespace

SeparationReport separation_suite(long fuel) {
  SeparationReport rep;

  auto run_case = [&](const char* p_body) {
    auto parsed = lam::parse(joly_source(p_body));
    auto compiled = lam::compile_program(parsed, lam::Mode::bohm_eta);
    return gam_eta_run(compiled.phi, compiled.psi, fuel).run;
  };

  rep.run_y = run_case("x y");
  rep.run_xy = run_case("x (x y)");
  rep.term_y = rep.run_y.term;
  rep.term_xy = rep.run_xy.term;
  rep.final_stamp_y = rep.run_y.max_stamp();
  rep.final_stamp_xy = rep.run_xy.max_stamp();

  rep.oracle_y = lam::head_observable(lam::normalize(joly_pure("x y")));
  rep.oracle_xy = lam::head_observable(lam::normalize(joly_pure("x (x y)")));
  return rep;
}

}  // namespace abt
