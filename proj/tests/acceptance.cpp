// Acceptance suite: one pass/fail line per criterion, each with its time
// budget pinned in code.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <vector>

#include "abt/equivalence.hpp"
#include "abt/extensions/fax.hpp"
#include "abt/extensions/strong.hpp"
#include "abt/frontends/cbv.hpp"
#include "abt/frontends/lambda.hpp"
#include "abt/frontends/pcf.hpp"
#include "abt/frontends/classical.hpp"
#include "abt/frontends/ludics.hpp"
#include "abt/machines/eam.hpp"
#include "abt/machines/gam.hpp"
#include "abt/text.hpp"
#include "support.hpp"

using namespace abt;
using testutil::fixture;

namespace {

struct Checker {
  std::vector<std::string> failures;
  void check(bool cond, const std::string& what) {
    if (!cond) failures.push_back(what);
  }
  void eq_text(const std::string& got, const std::string& want,
               const std::string& what) {
    if (got != want)
      failures.push_back(what + ":\n--- got ---\n" + got +
                         "--- want ---\n" + want);
  }
};

struct Criterion {
  int id;
  const char* title;
  double budget_sec;
  std::function<void(Checker&)> fn;
};

// Expected multiplexed trees of the worked examples.

const char* kDoubleCall =
    "phi:\n"
    "  <\u2022@1> [u|_]\n"
    "    <1@3> [u|_]\n"
    "      <1@5> [1|1]\n"
    "    <1@7> [u|_]\n"
    "      <1@9> [1|1]\n"
    "psi u:\n"
    "  <u@2> [1|0]\n"
    "    <1@6> [1|1]\n"
    "      <1@10> [z|_]\n"
    "  <u@4> [1|0]\n"
    "  <u@8> [1|0]\n";

const char* kPcfCase =
    "phi:\n"
    "  <\u2022@1> [f|_]\n"
    "    <1@3> [tt|0]\n"
    "    <ff@5> [tt|1]\n"
    "psi f:\n"
    "  <f@2> [1|0]\n"
    "    <tt@4> [ff|1]\n";

const char* kCbvMain =
    "phi:\n"
    "  <\u2022@1> [(?\u2022,x)|_]\n"
    "    <?3@3> [!5|0]\n"
    "    <!7@5> [(?7,v)|_]\n"
    "      <!8@7> [(!8,alpha)|_]\n"
    "psi (?\u2022,x):\n"
    "  <(?\u2022,x)@2> [?3|0]\n"
    "    <!5@4> [!7|1]\n"
    "psi (?7,v):\n"
    "  <(?7,v)@6> [!8|0]\n";

const char* kNonNormal =
    "phi:\n"
    "  <\u2022@1> [*|_]\n"
    "    <*@2> [*|_]\n"
    "      <*@3> [*|_]\n"
    "        <*@4> [1|1]\n"
    "          <1@8> [t|_]\n"
    "      <1@5> [1|1]\n"
    "        <1@7> [1|1]\n"
    "    <1@6> [1|0]\n";

const char* kDdAt21 =
    "phi:\n"
    "  <\u2022@1> [x|_]\n"
    "    <1@3> [x|_]\n"
    "      <1@5> [1|1]^\u03b7\n"
    "        <1@11> [1|1]^2\u03b7\n"
    "      <1@13> [1|1]^\u03b7\n"
    "        <1@19> [1|1]^2\u03b7\n"
    "    <1@7> [x|_]\n"
    "      <1@9> [1|1]^\u03b7\n"
    "    <1@15> [x|_]\n"
    "      <1@17> [1|1]^\u03b7\n"
    "psi x:\n"
    "  <x@2> [1|0]\n"
    "    <1@6> [1|1]\n"
    "      <1@10> [1|1]^\u03b7\n"
    "    <1@14> [1|1]\n"
    "      <1@18> [1|1]^\u03b7\n"
    "  <x@4> [1|0]\n"
    "    <1@12> [1|1]\n"
    "      <1@20> [1|1]^\u03b7\n"
    "  <x@8> [1|0]\n"
    "  <x@16> [1|0]\n";

const char* kJolyY =
    "phi:\n"
    "  <\u2022@1> [z|_]\n"
    "    <3@5> [2|0]\n"
    "      <2@29> [4|1]^\u03b7\n"
    "    <1@17> [2|0]\n"
    "    <5@33> [\u03a9|_]\n"
    "psi b:\n"
    "  <b@8> [1|0]\n"
    "    <1@14> [2|1]^\u03b7\n"
    "      <2@20> [2|1]^2\u03b7\n"
    "    <4@26> [5|1]^\u03b7\n"
    "psi x:\n"
    "  <x@3> [4|0]\n"
    "    <2@7> [b|_]\n"
    "      <1@9> [1|2]\n"
    "        <1@13> [1|1]^\u03b7\n"
    "          <2@21> [2|1]^2\u03b7\n"
    "        <4@25> [4|1]^\u03b7\n"
    "      <2@15> [2|2]\n"
    "        <2@19> [2|1]^\u03b7\n"
    "      <5@27> [2|1]^\u03b7\n"
    "    <4@31> [6|1]^\u03b7\n"
    "psi y:\n"
    "  <y@11> [1|0]\n"
    "    <2@23> [4|1]^\u03b7\n"
    "psi z:\n"
    "  <z@2> [x|_]\n"
    "    <4@4> [3|1]^\u03b7\n"
    "      <2@6> [2|1]^2\u03b7\n"
    "        <2@28> [2|1]^3\u03b7\n"
    "      <4@30> [4|1]^2\u03b7\n"
    "    <1@10> [y|_]\n"
    "      <1@12> [1|1]^\u03b7\n"
    "        <2@22> [2|1]^2\u03b7\n"
    "      <4@24> [4|1]^\u03b7\n"
    "    <2@16> [1|1]^\u03b7\n"
    "      <2@18> [2|1]^2\u03b7\n"
    "    <6@32> [5|1]^\u03b7\n";

const char* kJolyXyPhi =
    "phi:\n"
    "  <\u2022@1> [z|_]\n"
    "    <3@5> [2|0]\n"
    "      <1@17> [3|1]^\u03b7\n"
    "        <1@25> [1|1]^2\u03b7\n"
    "          <2@53> [2|1]^3\u03b7\n"
    "        <4@61> [4|1]^2\u03b7\n"
    "      <3@73> [5|1]^\u03b7\n"
    "    <4@21> [1|0]\n"
    "      <2@57> [4|1]^\u03b7\n"
    "    <2@39> [2|0]\n"
    "    <6@77> [\u2720|_]\n";

const char* kFax =
    "phi:\n"
    "  <\u2022@1> [x2|_]\n"
    "    <a@3> [a|1]^\u03b7\n"
    "      <b@4> [b|1]^2\u03b7\n"
    "psi x2:\n"
    "  <x2@2> [a|0]\n"
    "    <b@5> [y|_]\n";

std::string phi_only(const MTrees& t) {
  MTrees p;
  auto it = t.roots.find(Move::bullet());
  if (it != t.roots.end()) p.roots[Move::bullet()] = it->second;
  return render_mtrees(p);
}

std::vector<long> stamps(const GamRun& run, const Move& root) {
  return opp_stamps(build_mtrees(run.items), root);
}

// criterion 1 — the double-call example trace reproduction
void c1(Checker& ck) {
  auto c = lam::compile_program(lam::parse(fixture("bohm_double_call.lam")));
  auto run = gam_run(c.phi, c.psi, 100000);
  ck.check(run.term.kind == Termination::Kind::free_answer &&
               run.term.move == Move::named("z"),
           "halts with FreeAnswer(z)");
  ck.check(stamps(run, Move::bullet()) == std::vector<long>({1, 3, 5, 7, 9}),
           "phi opponent stamps are {1,3,5,7,9}");
  ck.check(stamps(run, Move::named("u")) ==
               std::vector<long>({2, 4, 6, 8, 10}),
           "psi opponent stamps are {2,4,6,8,10}");
  ck.eq_text(render_mtrees(build_mtrees(run.items)), kDoubleCall,
             "multiplexed trees match the double-call display");
}

// criterion 2 — Pcf trace reproduction
void c2(Checker& ck) {
  auto c = pcf::compile_program(pcf::parse(fixture("pcf_case.pcf")));
  auto run = gam_run(c.phi, c.psi, 100000);
  ck.check(run.term.kind == Termination::Kind::answer &&
               run.term.move == Move::constant("tt"),
           "halts with Answer(tt) (case 1)");
  ck.check(stamps(run, Move::bullet()) == std::vector<long>({1, 3, 5}),
           "phi stamps {1,3,5}");
  ck.check(stamps(run, Move::named("f")) == std::vector<long>({2, 4}),
           "psi stamps {2,4}");
  ck.eq_text(render_mtrees(build_mtrees(run.items)), kPcfCase,
             "multiplexed trees match the Pcf case display");
}

// criterion 3 — call-by-value
void c3(Checker& ck) {
  {
    auto p = cbv::parse(fixture("cbv_main.cbv"));
    cbv::typecheck_program(p);
    auto c = cbv::compile_program(p);
    auto run = gam_run(c.phi, c.psi, 100000);
    ck.check(run.term.kind == Termination::Kind::free_answer &&
                 run.term.move == Move::cbv(true, 8, "alpha"),
             "main example delivers the value 8 to alpha");
    ck.check(run.items.size() >= 2 && run.items[1].stage == Stage::starred(2),
             "the first move is at stage 2*");
    ck.eq_text(render_mtrees(build_mtrees(run.items)), kCbvMain,
               "main example trees match the call-by-value display");
    auto m = cbv::run(p.cmd, p.env, 100000);
    ck.check(m.k == cbv::MachineResult::K::observable && m.cont == "alpha" &&
                 m.value && *m.value == 8,
             "the source machine agrees on (alpha, 8)");
  }
  {
    auto p = cbv::parse(fixture("cbv_addition.cbv"));
    cbv::typecheck_program(p);
    auto c = cbv::compile_program(p);
    auto run = gam_run(c.phi, c.psi, 100000);
    ck.check(run.term.kind == Termination::Kind::free_answer &&
                 run.term.move == Move::cbv(true, 7, "gamma"),
             "second example delivers (!7, gamma)");
    auto m = cbv::run(p.cmd, p.env, 100000);
    ck.check(m.k == cbv::MachineResult::K::observable && m.cont == "gamma" &&
                 m.value && *m.value == 7,
             "the source machine agrees on (gamma, 7)");
  }
  {
    auto p = cbv::parse(fixture("cbv_apply.cbv"));
    cbv::typecheck_program(p);
    auto c = cbv::compile_program(p);
    auto run = gam_run(c.phi, c.psi, 100000);
    ck.check(run.term.kind == Termination::Kind::free_answer &&
                 run.term.move == Move::cbv(true, 3, "alpha"),
             "third example delivers (!3, alpha)");
    auto m = cbv::run(p.cmd, p.env, 100000);
    ck.check(m.k == cbv::MachineResult::K::observable && m.cont == "alpha" &&
                 m.value && *m.value == 3,
             "the source machine agrees on (alpha, 3)");
  }
}

// criterion 4 — strong reduction readback
void c4(Checker& ck) {
  {
    auto c = lam::compile_program(lam::parse(fixture("compose_ex1.lam")));
    auto run = strong_run_exhaustive(c.phi, c.psi, 6, {});
    Rooted got = readback_composition(run.responses);
    Rooted want =
        lam::compile_program(lam::Parsed{lam::parse_term("\\u. u z"), {}})
            .phi;
    ck.check(tree_equal(got.tree, want.tree),
             "Example 1 reads back (λu. u z)");
  }
  {
    auto c = lam::compile_program(lam::parse(fixture("compose_ex2.lam")));
    auto run = strong_run_exhaustive(c.phi, c.psi, 6, {});
    Rooted got = readback_composition(run.responses);
    Rooted want =
        lam::compile_program(lam::Parsed{lam::parse_term("y (\\t. t)"), {}})
            .phi;
    ck.check(tree_equal(got.tree, want.tree),
             "Example 2 reads back (y (λt. t))");
  }
}

// criterion 5 — GAM* on non-normal forms
void c5(Checker& ck) {
  auto c = lam::compile_program(lam::parse(fixture("static_binding.lam")),
                                lam::Mode::star);
  auto run = gam_star_run(c.phi, 100000);
  ck.check(run.term.kind == Termination::Kind::free_answer &&
               run.term.move == Move::named("t"),
           "static binding yields t, not u");
  ck.check(stamps(run, Move::bullet()) ==
               std::vector<long>({1, 2, 3, 4, 5, 6, 7, 8}),
           "opponent stamps 1..8");
  ck.eq_text(render_mtrees(build_mtrees(run.items)), kNonNormal,
             "stamps placed as displayed");
}

// criterion 6 — η on ΔΔ
void c6(Checker& ck) {
  auto c = lam::compile_program(lam::parse(fixture("delta_delta.lam")),
                                lam::Mode::bohm_eta);
  auto plain = gam_run(c.phi, c.psi, 100000);
  ck.check(plain.term.kind == Termination::Kind::blocked &&
               plain.term.at == Stage::starred(5),
           "the plain GAM is blocked at stage 5*");
  auto er = gam_eta_run(c.phi, c.psi, 10000);
  ck.check(er.run.term.kind == Termination::Kind::fuel,
           "the GAM_η does not terminate");
  ck.check(Stage::starred(21) < er.run.last_stage() ||
               er.run.last_stage() == Stage::starred(21),
           "the GAM_η reaches at least stage 21*");
  ck.eq_text(
      render_mtrees(build_mtrees_upto(er.run.items, Stage::starred(21))),
      kDdAt21, "expanded trees at stage 21* as displayed");
}

// criterion 7 — Böhm separation
void c7(Checker& ck) {
  auto rep = separation_suite(100000);
  ck.check(rep.term_y.kind == Termination::Kind::free_answer &&
               rep.term_y.move == Move::omega(),
           "P ≡ y yields FreeAnswer(Ω)");
  ck.check(rep.final_stamp_y == 33, "final stamp 33 for P ≡ y");
  ck.check(rep.term_xy.kind == Termination::Kind::free_answer &&
               rep.term_xy.move == Move::daimon(),
           "P ≡ xy yields FreeAnswer(✠)");
  ck.check(rep.final_stamp_xy == 77, "final stamp 77 for P ≡ xy");
  ck.eq_text(render_mtrees(build_mtrees(rep.run_y.items)), kJolyY,
             "P ≡ y trees match the execution display");
  ck.eq_text(phi_only(build_mtrees(rep.run_xy.items)), kJolyXyPhi,
             "P ≡ xy main tree matches the execution figure");
  // stamp coverage: one opponent move per plain stage
  std::vector<long> all;
  for (const auto& [mv, _] : build_mtrees(rep.run_xy.items).roots)
    for (long s : stamps(rep.run_xy, mv)) all.push_back(s);
  std::sort(all.begin(), all.end());
  bool contiguous = all.size() == 77;
  for (long i = 0; contiguous && i < 77; ++i)
    contiguous = all[static_cast<std::size_t>(i)] == i + 1;
  ck.check(contiguous, "P ≡ xy places opponent stamps 1..77");
  ck.check(rep.oracle_y == Move::omega() && rep.oracle_xy == Move::daimon(),
           "the source reduction chains end in Ω and ✠");
}

// criterion 8 — copy-cat
void c8(Checker& ck) {
  {
    auto p = parse_program(fixture("fax.abt"));
    Arena arena(p.phi, p.psi, EtaMode::on);
    ScriptPilot pilot;
    pilot.script = {Move::named("b")};
    pilot.strict = false;
    StrongOptions opts;
    opts.extra_moves = {Move::named("a"), Move::named("b")};
    auto run = strong_run(arena, pilot, opts);
    ck.check(run.responses.size() == 2, "two composite responses");
    ck.check(!run.responses.empty() && run.responses.back().back().player &&
                 run.responses.back().back().move == Move::named("y") &&
                 run.responses.back().back().free_ptr,
             "the run ends on the free answer y");
    ck.eq_text(render_mtrees(build_mtrees(strong_ledger(run))), kFax,
               "stamps 1..5 of the copy-cat run");
  }
  // strong composition with the static fax is the identity
  std::vector<Move> alphabet = {Move::numeral(1), Move::numeral(2),
                                Move::numeral(3)};
  int agreed = 0;
  for (int i = 0; i < 50; ++i) {
    auto rc = random_case(5000 + static_cast<std::uint64_t>(i));
    StrategyPtr target = rc.psi.entries.begin()->second.tree;
    CounterStrategy psi;
    psi.entries[Move::named("x")] = Rooted{target, -1};
    int depth = 4;
    // the replay mirrors ψ-positions, whose depth is bounded by the
    // target tree's depth, so the copy-cat must be at least that deep
    Rooted main = fax(Move::named("x"), alphabet, 8);
    auto run = strong_run_exhaustive(main, psi, depth, {});
    Rooted rb = readback_composition(run.responses);
    if (tree_equal(testutil::truncate_tree(rb.tree, depth),
                   testutil::truncate_tree(target, depth)))
      ++agreed;
  }
  ck.check(agreed == 50,
           "fax composition reproduces all 50 random strategies (agreed: " +
               std::to_string(agreed) + ")");
}

// criterion 9 — machine equivalence
void c9(Checker& ck) {
  auto run_case = [&](const std::string& name, const Rooted& phi,
                      const CounterStrategy& psi, const EamProgram& eam,
                      bool star = false) {
    LockstepOptions opts;
    opts.star = star;
    auto rep = check_lockstep(name, phi, psi, eam, opts);
    std::string msg = name + " lock-steps with zero divergences";
    if (!rep.ok())
      msg += " (first: " + rep.divergences[0].where + " " +
             rep.divergences[0].detail + ")";
    ck.check(rep.ok(), msg);
  };
  {
    auto c = lam::compile_program(lam::parse(fixture("bohm_double_call.lam")));
    run_case("bohm_double_call", c.phi, c.psi, c.eam);
  }
  {
    auto c = pcf::compile_program(pcf::parse(fixture("pcf_case.pcf")));
    run_case("pcf_case", c.phi, c.psi, c.eam);
  }
  {
    auto c = mu::compile_program(mu::parse(fixture("mu_chain.pcfmu")));
    run_case("mu_chain", c.phi, c.psi, c.eam);
  }
  for (const char* f : {"cbv_main.cbv", "cbv_addition.cbv", "cbv_apply.cbv"}) {
    auto p = cbv::parse(fixture(f));
    auto c = cbv::compile_program(p);
    run_case(f, c.phi, c.psi, c.eam);
  }
  for (const char* f : {"ludics_m1.lud", "ludics_m2.lud"}) {
    auto c = lud::compile_program(lud::parse(fixture(f)));
    run_case(f, c.phi, c.psi, c.eam);
  }
  {
    auto c = lam::compile_program(lam::parse(fixture("static_binding.lam")),
                                  lam::Mode::star);
    run_case("static_binding", c.phi, c.psi, c.eam, true);
  }
  auto camp = run_campaign(20260809, 500);
  int bad = 0;
  for (const auto& rep : camp.cases)
    if (!rep.ok()) ++bad;
  ck.check(bad == 0, "500 seeded random pairs lock-step (diverged: " +
                         std::to_string(bad) + ")");
}

// criterion 10 — β-oracle
void c10(Checker& ck) {
  int agreed = 0;
  for (int i = 0; i < 200; ++i) {
    auto oc = testutil::oracle_case(777 + static_cast<std::uint64_t>(i));
    Move want = lam::head_observable(lam::normalize(oc.closed, 1000000));
    lam::Parsed prog{oc.body, {{"x1", oc.c1}, {"x2", oc.c2}}};
    auto c = lam::compile_program(prog);
    auto g = gam_run(c.phi, c.psi, 1000000);
    EamOptions eo;
    eo.fuel = 1000000;
    auto e = eam_run(c.eam, eo);
    bool ok = g.term.kind == Termination::Kind::answer &&
              g.term.move == want && e.term.kind == g.term.kind &&
              e.term.move == want;
    if (ok) ++agreed;
  }
  ck.check(agreed == 200,
           "EAM/GAM head observable equals the β-normal head on all 200 "
           "terms (agreed: " +
               std::to_string(agreed) + ")");
}

// criterion 11 — finite-depth termination
void c11(Checker& ck) {
  int halted = 0;
  RandomSpec spec;
  spec.max_depth = 8;
  for (int i = 0; i < 1000; ++i) {
    auto rc = random_case(31337 + static_cast<std::uint64_t>(i), spec);
    Arena arena(rc.phi, rc.psi);
    GamOptions opts;
    opts.fuel = 1000000;
    auto run = gam_run(arena, opts);
    if (run.term.kind != Termination::Kind::fuel) ++halted;
  }
  ck.check(halted == 1000,
           "all 1000 finite-depth pairs halt within fuel 10^6 (halted: " +
               std::to_string(halted) + ")");
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "Böhm-tree trace reproduction", 1.0, c1},
      {2, "Pcf trace reproduction", 1.0, c2},
      {3, "call-by-value", 1.0, c3},
      {4, "strong readback", 2.0, c4},
      {5, "GAM* on non-normal forms", 1.0, c5},
      {6, "η on ΔΔ", 1.0, c6},
      {7, "Böhm separation", 2.0, c7},
      {8, "fax copy-cat", 10.0, c8},
      {9, "machine equivalence", 60.0, c9},
      {10, "β-oracle", 30.0, c10},
      {11, "finite-depth termination", 60.0, c11},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Checker ck;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.fn(ck);
    } catch (const std::exception& e) {
      ck.failures.push_back(std::string("exception: ") + e.what());
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (secs > c.budget_sec)
      ck.failures.push_back("over time budget: " + std::to_string(secs) +
                            "s > " + std::to_string(c.budget_sec) + "s");
    std::printf("criterion %2d (%s): %s (%.2fs)\n", c.id, c.title,
                ck.failures.empty() ? "PASS" : "FAIL", secs);
    for (const auto& f : ck.failures) std::printf("    %s\n", f.c_str());
    if (!ck.failures.empty()) ++failed;
  }
  if (failed) std::printf("%d criterion(s) failed\n", failed);
  return failed ? 1 : 0;
}
