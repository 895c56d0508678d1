#include <doctest.h>

#include "abt/equivalence.hpp"
#include "abt/frontends/lambda.hpp"
#include "abt/frontends/pcf.hpp"
#include "abt/text.hpp"
#include "support.hpp"

using namespace abt;
using testutil::fixture;

TEST_CASE("base clauses: <•>_1 maps to <•@1>_1 and back; •^# = 1") {
  VamState v;
  v.items.push_back(VamItem{VamItem::Kind::bullet, Stage::plain(1),
                            Move::bullet(), Pointer::free(), 0, "(1)"});
  GamState g = vam_to_gam(v);
  REQUIRE(g.items.size() == 1);
  CHECK(pos_str(g.items[0].pos) == "<•@1>");
  VamState back = gam_to_vam(g);
  CHECK(back.items.size() == 1);
  CHECK(back.items[0].kind == VamItem::Kind::bullet);
  CHECK(sam_step_number(SamState{sam_bullet()}) == Stage::plain(1));
}

TEST_CASE("per-stage translations agree on the double-call run") {
  auto c = lam::compile_program(lam::parse(fixture("bohm_double_call.lam")));
  auto rep = check_lockstep("bohm_double_call", c.phi, c.psi, c.eam, {});
  for (const auto& d : rep.divergences)
    MESSAGE(d.stage.str(), " ", d.where, " ", d.detail);
  CHECK(rep.ok());
  CHECK(rep.halt_stage == Stage::starred(11));
}

TEST_CASE("round trip at stage 7 of the double-call run") {
  auto c = lam::compile_program(lam::parse(fixture("bohm_double_call.lam")));
  Arena arena(c.phi, c.psi);
  auto run = gam_run(arena, {});
  GamState prefix;
  for (const auto& it : run.items) {
    prefix.items.push_back(it);
    if (it.stage == Stage::plain(7)) break;
  }
  GamState rt = vam_to_gam(gam_to_vam(prefix));
  REQUIRE(rt.items.size() == prefix.items.size());
  for (std::size_t i = 0; i < rt.items.size(); ++i)
    CHECK(pos_equal(rt.items[i].pos, prefix.items[i].pos));
}

TEST_CASE("sam step numbers are monotone on substates") {
  auto c = pcf::compile_program(pcf::parse(fixture("pcf_case.pcf")));
  Arena arena(c.phi, c.psi);
  auto run = sam_run(arena, {});
  for (const auto& step : run.steps) {
    if (!std::holds_alternative<SamRPtr>(step.state)) continue;
    SamRPtr r = std::get<SamRPtr>(step.state);
    Stage outer = sam_step_number(step.state);
    Stage inner = sam_step_number(SamState{r->q});
    CHECK(inner < outer);
  }
}

TEST_CASE("prefix extraction: ⟦p1⟧^SG restricted to (p2)^# is ⟦p2⟧^SG") {
  auto c = lam::compile_program(lam::parse(fixture("bohm_double_call.lam")));
  Arena arena(c.phi, c.psi);
  auto run = sam_run(arena, {});
  const auto& last = run.steps.back().state;
  GamState full = sam_to_gam(last);
  // every recorded state is a substate of a later one; check a sample
  for (std::size_t i = 0; i < run.steps.size(); i += 3) {
    GamState part = sam_to_gam(run.steps[i].state);
    for (std::size_t j = 0; j < part.items.size(); ++j)
      CHECK(pos_equal(part.items[j].pos, full.items[j].pos));
  }
}

TEST_CASE("sam_to_eam reproduces the initial state and invariant (2)") {
  auto c = lam::compile_program(lam::parse(fixture("bohm_double_call.lam")));
  SpecEamState init = sam_to_eam(sam_bullet(), c.eam);
  CHECK(init.code == c.eam.main.root.get());
  REQUIRE(init.env);
  CHECK(init.env->top);

  // invariant (2) at the first bound lookup of the double-call run: the machine
  // resolves [1|r-block] to the closure the translation reconstructs.
  Arena arena(c.phi, c.psi);
  auto srun = sam_run(arena, {});
  // stage 2 is the query <u,...>; its answer [1|0] is the first bound head
  SamQPtr q2 = std::get<SamQPtr>(srun.steps[Stage::plain(2).index()].state);
  SpecEamState st = sam_to_eam(q2, c.eam);
  // the code's head is bound; pop^0 of the query annotates the response
  // whose code holds the branch the environment must return
  REQUIRE(st.code->hbind != "");
  auto ann = sam_dnumber(q2);
  REQUIRE(ann);
  SpecEamState target = sam_to_eam((*ann)->q, c.eam);
  const CBranch* br = target.code->child(st.code->head);
  REQUIRE(br);
  // walk the translated environment for the head key, as the machine would
  const SpecEnv* f = st.env.get();
  while (f && f->binder != st.code->hbind) f = f->parent.get();
  REQUIRE(f);
  CHECK(f->call->child(st.code->head)->sub == br->sub);
}

TEST_CASE("a corrupted ledger is flagged at the corrupted stage") {
  auto c = lam::compile_program(lam::parse(fixture("bohm_double_call.lam")));
  Arena arena(c.phi, c.psi);
  auto run = gam_run(arena, {});
  auto corrupted = run.items;
  // swap a stamp deep in a position at stage 6
  std::size_t idx = Stage::plain(6).index();
  Pos bad = extend_opp(corrupted[idx].pos->prev, corrupted[idx].pos->move,
                       99);
  corrupted[idx].pos = bad;
  auto divs = compare_ledgers(run.items, corrupted);
  REQUIRE(!divs.empty());
  CHECK(divs[0].stage == Stage::plain(6));
}

TEST_CASE("the η variants of the ledger machines stay in lock-step") {
  auto c = lam::compile_program(lam::parse(fixture("delta_delta.lam")),
                                lam::Mode::bohm_eta);
  LockstepOptions opts;
  opts.eta = true;
  opts.fuel = 300;
  opts.with_eam = false;
  auto rep = check_lockstep("delta_delta-eta", c.phi, c.psi, c.eam, opts);
  for (const auto& d : rep.divergences)
    MESSAGE(d.stage.str(), " ", d.where, " ", d.detail);
  CHECK(rep.ok());
  CHECK(rep.stages == 300);

  auto sep = lam::compile_program(lam::parse(fixture("separation_y.lam")),
                                  lam::Mode::bohm_eta);
  auto rep2 = check_lockstep("separation_y-eta", sep.phi, sep.psi, sep.eam,
                             opts);
  for (const auto& d : rep2.divergences)
    MESSAGE(d.stage.str(), " ", d.where, " ", d.detail);
  CHECK(rep2.ok());
  CHECK(rep2.halt_stage == Stage::starred(34));
}

TEST_CASE("a seeded random sample lock-steps cleanly") {
  auto camp = run_campaign(4242, 40);
  for (const auto& rep : camp.cases) {
    if (!rep.ok())
      MESSAGE("seed ", rep.seed, ": ", rep.divergences[0].where, " ",
              rep.divergences[0].detail);
    CHECK(rep.ok());
  }
}
