#include <doctest.h>

#include "abt/frontends/lambda.hpp"
#include "abt/frontends/pcf.hpp"
#include "abt/machines/eam.hpp"
#include "abt/machines/gam.hpp"
#include "abt/machines/sam.hpp"
#include "abt/machines/vam.hpp"
#include "abt/text.hpp"
#include "support.hpp"

using namespace abt;
using testutil::fixture;

namespace {
lam::Compiled bohm_double_call() {
  return lam::compile_program(lam::parse(fixture("bohm_double_call.lam")));
}
pcf::Compiled pcf_case_fixture() {
  return pcf::compile_program(pcf::parse(fixture("pcf_case.pcf")));
}
}  // namespace

TEST_CASE("gam_step fires the the double-call example rules in order") {
  auto c = bohm_double_call();
  Arena arena(c.phi, c.psi);
  GamState s;
  GamOptions opts;
  // (1)
  REQUIRE(!gam_step(s, arena, opts));
  CHECK(pos_str(s.items.back().pos) == "<•@1>");
  // (2*) looks up φ, (2)_f lands <u@2> at ψ's root
  REQUIRE(!gam_step(s, arena, opts));
  REQUIRE(!gam_step(s, arena, opts));
  CHECK(s.items.back().rule == "(2n)_f");
  CHECK(pos_str(s.items.back().pos) == "<u@2>");
  // (3*) then (3) places <1@3> under Φ's stamp-1 node
  REQUIRE(!gam_step(s, arena, opts));
  REQUIRE(!gam_step(s, arena, opts));
  CHECK(pos_str(s.items.back().pos) == "<•@1>[u|_]<1@3>");
  // run to the end: FreeAnswer(z) after stamp 10
  std::optional<Termination> t;
  while (!(t = gam_step(s, arena, opts))) {
  }
  CHECK(t->kind == Termination::Kind::free_answer);
  CHECK(t->move == Move::named("z"));
  CHECK(t->at == Stage::starred(11));
  GamRun run{s.items, *t};
  CHECK(run.max_stamp() == 10);
}

TEST_CASE("gam_run classifies the Pcf case run as an answer at the root") {
  auto c = pcf_case_fixture();
  auto run = gam_run(c.phi, c.psi, 1000);
  CHECK(run.term.kind == Termination::Kind::answer);
  CHECK(run.term.move == Move::constant("tt"));
  CHECK(run.term.at == Stage::starred(6));
}

TEST_CASE("a single hooked free move halts as case 2 after 3*") {
  Program p = parse_program("(x _) [x <- (z _)]");
  Arena arena(p.phi, p.psi);
  GamState s;
  std::optional<Termination> t;
  while (!(t = gam_step(s, arena, {}))) {
  }
  CHECK(s.items.size() == 4);  // 1, 2*, 2, 3*
  CHECK(t->kind == Termination::Kind::free_answer);
  CHECK(t->move == Move::named("z"));
  CHECK(t->at == Stage::starred(3));
}

TEST_CASE("classify_termination probes the final state") {
  auto c = pcf_case_fixture();
  Arena arena(c.phi, c.psi);
  GamState s;
  while (!gam_step(s, arena, {})) {
  }
  Arena arena2(c.phi, c.psi);
  Termination t = classify_termination(s, arena2);
  CHECK(t.kind == Termination::Kind::answer);
  // a state that can still step is not final
  GamState early;
  Arena arena3(c.phi, c.psi);
  gam_step(early, arena3, {});
  CHECK_THROWS_AS(classify_termination(early, arena3), MalformedState);
}

TEST_CASE("blocked runs report the last starred stage (η preamble)") {
  Program p = parse_program("(x^0 _) [x^1 <- (a^0 0)]");
  auto run = gam_run(p.phi, p.psi, 1000);
  CHECK(run.term.kind == Termination::Kind::blocked);
  CHECK(run.term.at == Stage::starred(3));
  CHECK(run.items.size() == 5);  // the query <a@3> is placed
}

TEST_CASE("vam views reconstruct strategy-local positions") {
  auto c = bohm_double_call();
  Arena arena(c.phi, c.psi);
  auto run = vam_run(arena, {});
  CHECK(run.term.kind == Termination::Kind::free_answer);
  CHECK(run.term.move == Move::named("z"));
  CHECK(run.term.at == Stage::starred(11));
  // view(Γ,1) = <•>
  CHECK(pos_str_erased(vam_view(run.state, 1)) == "<•>");
  // "the view at step (2) consists of <u> only"
  CHECK(pos_str_erased(vam_view(run.state, 2)) == "<u>");
  // the Hyland–Ong view <•>[u|_]<1>[u|_] is the view the lookup at
  // stage (8*) extends: view(Γ,7) answered by [u|_]
  CHECK(pos_str_erased(vam_view(run.state, 7)) == "<•>[u|_]<1>");
  CHECK(run.state.at(Stage::starred(8))->move == Move::named("u"));
  // extended by one move (the stage-5 view of the same play)
  CHECK(pos_str_erased(vam_view(run.state, 5)) ==
        "<•>[u|_]<1>[u|_]<1>");
  // dview keeps the stamps
  CHECK(pos_str(vam_dview(run.state, 5)) ==
        "<•@1>[u|_]<1@3>[u|_]<1@5>");
}

TEST_CASE("vam: the play prefix of the double-call run") {
  auto c = bohm_double_call();
  Arena arena(c.phi, c.psi);
  auto run = vam_run(arena, {});
  // moves played successively: <•>, [u|_], u, [1|0], <1>, ...
  const auto& it = run.state.items;
  REQUIRE(it.size() >= 5);
  CHECK(it[0].kind == VamItem::Kind::bullet);
  CHECK((it[1].kind == VamItem::Kind::player &&
         it[1].move == Move::named("u") && it[1].ptr.is_free()));
  CHECK((it[2].kind == VamItem::Kind::bare && it[2].move == Move::named("u")));
  CHECK((it[3].kind == VamItem::Kind::player &&
         it[3].move == Move::numeral(1) && it[3].ptr == Pointer::bound(0)));
  CHECK((it[4].kind == VamItem::Kind::jump && it[4].move == Move::numeral(1) &&
         it[4].jump_to == 2));
}

TEST_CASE("vam jump arithmetic resolves pointers") {
  auto c = bohm_double_call();
  Arena arena(c.phi, c.psi);
  auto run = vam_run(arena, {});
  // jump_0 is the stage itself
  CHECK(vam_jump(run.state, 0, 5) == 5);
  // at stage (6): the move [1|1] pops once, landing at stage 3
  CHECK(vam_jump(run.state, 1, 5) == 3);
  CHECK_THROWS_AS(vam_jump(run.state, 5, 5), PointerOutOfRange);
}

TEST_CASE("sam runs are history-free but lock-step with the GAM") {
  auto c = pcf_case_fixture();
  Arena ga(c.phi, c.psi);
  auto g = gam_run(ga, {});
  Arena sa(c.phi, c.psi);
  auto s = sam_run(sa, {});
  CHECK(s.term.kind == g.term.kind);
  CHECK(s.term.move == g.term.move);
  CHECK(s.term.at == g.term.at);
  CHECK(s.steps.size() == g.items.size());
  // pop^0 returns the annotation of the final opponent move
  auto q = std::get<SamQPtr>(s.steps[4].state);  // stage 3
  REQUIRE(sam_dnumber(q));
  CHECK(sam_pop_n(q, 0) == q);
}

TEST_CASE("the first SAM steps of the double-call example follow the nested grammar") {
  auto c = bohm_double_call();
  Arena arena(c.phi, c.psi);
  std::vector<SamStep> steps;
  sam_step(steps, arena, {});  // (1): •
  sam_step(steps, arena, {});  // (2*): •[u|_]
  sam_step(steps, arena, {});  // (2)_f: <u, •[u|_]>
  CHECK(sam_str(steps[1].state) == "•[u|_]");
  CHECK(sam_str(steps[2].state) == "<u,•[u|_]>");
}

TEST_CASE("eam: bound lookup enters the call-site branch") {
  // ⟨[a|x]{}, ρ⟩ with ρ(x,a) = (Q)[ρ'] → ⟨Q, ρ'⟩
  auto q = make_cnode(Move::named("b"), "", {});
  auto inner = make_cnode(Move::named("a"), "x", {});
  // e <- (λx.[a|x]{}) so the machine enters x's frame first
  EamProgram prog;
  prog.main = CTree{"root", -1,
                    make_cnode(Move::named("e"), "",
                               {CBranch{Move::named("a"), "q", -1, q}})};
  prog.entries[Move::named("e")] = CTree{"x", -1, inner};
  auto run = eam_run(prog, {});
  // states: main, then x's body [a|x], then the branch body [b|_]
  REQUIRE(run.states.size() == 3);
  CHECK(run.states[2].code->head == Move::named("b"));
  CHECK(run.term.kind == Termination::Kind::free_answer);
  CHECK(run.term.move == Move::named("b"));
}

TEST_CASE("eam matches machine terminations on the bundled fixtures") {
  {
    auto c = bohm_double_call();
    auto run = eam_run(c.eam, {});
    CHECK(run.term.kind == Termination::Kind::free_answer);
    CHECK(run.term.move == Move::named("z"));
    CHECK(run.term.at == Stage::starred(11));
  }
  {
    auto c = pcf_case_fixture();
    auto run = eam_run(c.eam, {});
    CHECK(run.term.kind == Termination::Kind::answer);
    CHECK(run.term.move == Move::constant("tt"));
    CHECK(run.term.at == Stage::starred(6));
  }
}

TEST_CASE("eam in star mode evaluates the static-binding term to t") {
  auto c = lam::compile_program(lam::parse(fixture("static_binding.lam")),
                                lam::Mode::star);
  EamOptions opts;
  opts.star = true;
  auto run = eam_run(c.eam, opts);
  CHECK(run.term.kind == Termination::Kind::free_answer);
  CHECK(run.term.move == Move::named("t"));
  auto g = gam_star_run(c.phi, 1000);
  CHECK(g.term.kind == run.term.kind);
  CHECK(g.term.move == run.term.move);
}

TEST_CASE("fuel exhaustion is reported, not looped") {
  Program p = parse_program("(x _) [x <- (x _)]");  // a cyclic hook
  Arena arena(p.phi, p.psi);
  auto run = gam_run(arena, GamOptions{50, false});
  CHECK(run.term.kind == Termination::Kind::fuel);
}
