#include <doctest.h>

#include "abt/equivalence.hpp"
#include "abt/extensions/fax.hpp"
#include "abt/extensions/strong.hpp"
#include "abt/frontends/lambda.hpp"
#include "abt/machines/gam.hpp"
#include "abt/text.hpp"
#include "support.hpp"

using namespace abt;
using testutil::fixture;

TEST_CASE("strong: a lone free move gives a single composite response") {
  Rooted phi = parse_strategy("(a _)");
  auto run = strong_run_exhaustive(phi, {}, 3, {});
  REQUIRE(run.responses.size() == 1);
  CHECK(composite_str(run.responses[0]) == "<•@1>[a|_]");
  Rooted rb = readback_composition(run.responses);
  CHECK(strategy_str(rb) == "(a _)");
}

TEST_CASE("strong: the first composite answer matches the weak run") {
  for (const char* f : {"bohm_double_call.lam", "compose_ex1.lam", "compose_ex2.lam"}) {
    auto c = lam::compile_program(lam::parse(fixture(f)));
    auto weak = gam_run(c.phi, c.psi, 10000);
    auto strong = strong_run_exhaustive(c.phi, c.psi, 0, {});
    REQUIRE(!strong.responses.empty());
    const CompMove& first = strong.responses[0].back();
    CHECK(first.move == weak.term.move);
    if (weak.term.kind == Termination::Kind::free_answer)
      CHECK(first.free_ptr);
    if (weak.term.kind == Termination::Kind::answer) {
      CHECK(!first.free_ptr);
      CHECK(first.stamp == 1);
    }
  }
}

TEST_CASE("strong: readback output passes the core invariants") {
  auto c = lam::compile_program(lam::parse(fixture("compose_ex1.lam")));
  auto run = strong_run_exhaustive(c.phi, c.psi, 6, {});
  Rooted rb = readback_composition(run.responses);
  CHECK(pointers_valid(rb));
}

TEST_CASE("strong: scripted pilots check legality eagerly") {
  auto c = lam::compile_program(lam::parse(fixture("compose_ex1.lam")));
  Arena arena(c.phi, c.psi);
  ScriptPilot pilot;
  pilot.script = {Move::numeral(9)};  // no such branch anywhere
  auto run = strong_run(arena, pilot, {});
  CHECK(run.end == StrongRun::End::illegal);
}

TEST_CASE("strong: the λ-oracle on closed typed compositions") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto oc = testutil::oracle_case(2024 + seed);
    lam::Parsed prog{oc.body, {{"x1", oc.c1}, {"x2", oc.c2}}};
    auto c = lam::compile_program(prog);
    int depth = 4;
    auto run = strong_run_exhaustive(c.phi, c.psi, depth, {});
    Rooted rb = readback_composition(run.responses);
    Rooted nf = lam::compile_program(
                    lam::Parsed{lam::normalize(oc.closed, 100000), {}})
                    .phi;
    CHECK(tree_equal(testutil::truncate_tree(rb.tree, depth),
                     testutil::truncate_tree(nf.tree, depth)));
  }
}

TEST_CASE("gam_eta: the preamble example completes to Answer(a)") {
  Program p = parse_program(fixture("eta_preamble.abt"));
  auto er = gam_eta_run(p.phi, p.psi, 100);
  CHECK(er.run.term.kind == Termination::Kind::answer);
  CHECK(er.run.term.move == Move::named("a"));
  CHECK(er.run.max_stamp() == 3);
  CHECK(er.expanded.find("~eta") != std::string::npos);
}

TEST_CASE("gam_eta: η-conservativity on η-long typed inputs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto oc = testutil::oracle_case(99 + seed);
    lam::Parsed prog{oc.body, {{"x1", oc.c1}, {"x2", oc.c2}}};
    auto plain_c = lam::compile_program(prog);
    auto eta_c = lam::compile_program(prog, lam::Mode::bohm_eta);
    auto plain = gam_run(plain_c.phi, plain_c.psi, 100000);
    auto er = gam_eta_run(eta_c.phi, eta_c.psi, 100000);
    REQUIRE(plain.items.size() == er.run.items.size());
    for (std::size_t i = 0; i < plain.items.size(); ++i) {
      CHECK(pos_equal(plain.items[i].pos, er.run.items[i].pos));
      CHECK(er.run.items[i].eta_level == 0);  // the η rules never fire
    }
    CHECK(plain.term.same_class(er.run.term));
  }
}

TEST_CASE("fax: depth 0 is the unexpanded variable") {
  Rooted f = fax(Move::named("a"), {Move::numeral(1)}, 0);
  CHECK(strategy_str(Rooted{f.tree, -1}) == "(a _)");
}

TEST_CASE("fax: every level answers by [b|1]") {
  Rooted f = fax(Move::named("x"), {Move::numeral(1), Move::numeral(2)}, 2);
  const Branch* b = f.tree->child(Move::numeral(2));
  REQUIRE(b);
  CHECK(b->sub->player == Move::numeral(2));
  CHECK(b->sub->ptr == Pointer::bound(1));
  REQUIRE(b->sub->child(Move::numeral(1)));
  CHECK(b->sub->child(Move::numeral(1))->sub->kids().empty());
}

TEST_CASE("separation suite smoke (full check in acceptance)") {
  auto rep = separation_suite(100000);
  CHECK(rep.term_y.move == Move::omega());
  CHECK(rep.term_xy.move == Move::daimon());
  CHECK(rep.oracle_y == Move::omega());
  CHECK(rep.oracle_xy == Move::daimon());
}
