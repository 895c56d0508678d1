#include <doctest.h>

#include <random>

#include "abt/concrete.hpp"
#include "abt/equivalence.hpp"
#include "abt/frontends/lambda.hpp"
#include "abt/frontends/pcf.hpp"
#include "abt/machines/gam.hpp"
#include "abt/text.hpp"
#include "support.hpp"

using namespace abt;

TEST_CASE("move printing is injective and parseable") {
  std::vector<Move> moves = {
      Move::bullet(),
      Move::numeral(0),
      Move::numeral(7),
      Move::constant("tt"),
      Move::constant("ff"),
      Move::constant("5"),
      Move::named("foo"),
      Move::star(),
      Move::omega(),
      Move::daimon(),
      Move::cbv(false, std::nullopt),
      Move::cbv(false, 3),
      Move::cbv(true, std::nullopt),
      Move::cbv(true, 8, "alpha"),
      Move::cbv(false, std::nullopt, "x"),
      Move::ludics_pair(0, {0}),
      Move::ludics_pair(2, {1, 3}),
      Move::ludics_call("x", {0, 1}),
  };
  for (std::size_t i = 0; i < moves.size(); ++i) {
    CHECK(Move::parse(moves[i].str()) == moves[i]);
    for (std::size_t j = i + 1; j < moves.size(); ++j)
      CHECK(moves[i].str() != moves[j].str());
  }
}

TEST_CASE("canonical move ordering puts numerals before constants") {
  CHECK(Move::bullet() < Move::numeral(1));
  CHECK(Move::numeral(2) < Move::constant("ff"));
  CHECK(Move::constant("ff") < Move::named("a"));
  CHECK(Move::named("zz") < Move::star());
  CHECK(Move::cbv(false, std::nullopt) < Move::cbv(false, 0));
  CHECK(Move::cbv(false, 9) < Move::cbv(true, std::nullopt));
}

static Pos q_double_call_arg() {
  // <u@2>[1|0]<1@6> from the double-call argument tree
  Pos p = extend_opp(nullptr, Move::named("u"), 2);
  p = extend_player(p, Move::numeral(1), Pointer::bound(0));
  return extend_opp(p, Move::numeral(1), 6);
}

TEST_CASE("erase drops stamps and keeps moves and pointers") {
  Pos p = q_double_call_arg();
  CHECK(pos_str(p) == "<u@2>[1|0]<1@6>");
  CHECK(pos_str(erase(p)) == "<u>[1|0]<1>");
  CHECK(erase(nullptr) == nullptr);
  Pos single = extend_player(extend_opp(nullptr, Move::named("x"), 2),
                             Move::numeral(1), Pointer::bound(0));
  CHECK(pos_equal_erased(erase(single), single));
}

TEST_CASE("pop and dnumber") {
  Pos q = q_double_call_arg();
  CHECK(pop_dnumber(q, 1) == 2);  // the the double-call example "move 1 which points to 2"
  CHECK(pop_dnumber(q, 0) == 6);  // pop^0 is the identity
  Pos q2 = extend_opp(
      extend_player(extend_opp(extend_player(extend_opp(nullptr,
                                                        Move::bullet(), 1),
                                             Move::named("u"),
                                             Pointer::free()),
                               Move::numeral(1), 3),
                    Move::named("u"), Pointer::free()),
      Move::numeral(1), 5);
  CHECK(pop_dnumber(q2, 1) == 3);
  CHECK_THROWS_AS(pop_dnumber(q, 2), PointerOutOfRange);
}

TEST_CASE("lookup walks the tree by opponent names only") {
  auto c = lam::compile_program(
      lam::Parsed{lam::parse_term("u (\\x. u (\\y. x))"), {}});
  // <•> answers [u|_]
  Pos root = extend_opp(nullptr, Move::bullet(), 0);
  auto a = lookup(c.phi, root);
  REQUIRE(a);
  CHECK(a->first == Move::named("u"));
  CHECK(a->second.is_free());
  // a query leaving the tree is simply absent
  Pos off = extend_opp(extend_player(root, Move::named("u"), Pointer::free()),
                       Move::named("b"), 0);
  CHECK(!lookup(c.phi, off));
}

TEST_CASE("lookup on the Pcf case strategy") {
  auto p = abt::pcf::parse("case f (tt) [ff => tt]");
  auto c = abt::pcf::compile_program(p);
  Pos q = extend_opp(extend_player(extend_opp(nullptr, Move::bullet(), 0),
                                   Move::named("f"), Pointer::free()),
                     Move::constant("ff"), 0);
  auto a = lookup(c.phi, q);
  REQUIRE(a);
  CHECK(a->first == Move::constant("tt"));
  CHECK(a->second == Pointer::bound(1));
}

TEST_CASE("compile_concrete implements the binder-list index rules") {
  // (λx.[a1|_]{(a2,([a3|x]{})),(a4,(λy.[a5|y]{}))})
  auto a3 = make_cnode(Move::named("a3"), "x", {});
  auto a5 = make_cnode(Move::named("a5"), "y", {});
  auto root = make_cnode(Move::named("a1"), "",
                         {CBranch{Move::named("a2"), "bx", -1, a3},
                          CBranch{Move::named("a4"), "y", -1, a5}});
  Rooted phi = compile_concrete(CTree{"x", -1, root});
  CHECK(strategy_str(phi) == "(a1 _ (a2 (a3 1)) (a4 (a5 0)))");
}

TEST_CASE("compile_concrete: innermost binder gets offset 0") {
  auto n = make_cnode(Move::named("a"), "x", {});
  Rooted phi = compile_concrete(CTree{"x", -1, n});
  CHECK(strategy_str(phi) == "(a 0)");
  auto f = make_cnode(Move::named("a"), "", {});
  CHECK(strategy_str(compile_concrete(CTree{"x", -1, f})) == "(a _)");
}

TEST_CASE("compile_concrete rejects unbound binder tokens") {
  auto n = make_cnode(Move::named("a"), "nope", {});
  CHECK_THROWS_AS(compile_concrete(CTree{"x", -1, n}), ScopeError);
}

TEST_CASE("decompile round trips and mints deterministic tokens") {
  auto c = lam::compile_program(
      lam::Parsed{lam::parse_term("u (\\x. u (\\y. x))"), {}});
  CTree back = decompile(c.phi);
  Rooted again = compile_concrete(back);
  CHECK(tree_equal(again.tree, c.phi.tree));
  CTree back2 = decompile(c.phi);
  CHECK(ctree_equal(back, back2));
  // ([a|_]{}) decompiles with no used binder
  Rooted free_only = parse_strategy("(a _)");
  CHECK(decompile(free_only).root->hbind.empty());
}

TEST_CASE("round-trip compile(decompile(compile(M))) over random trees") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto rc = random_case(seed);
    CHECK(pointers_valid(rc.phi));
    Rooted again = compile_concrete(decompile(rc.phi));
    CHECK(tree_equal(again.tree, rc.phi.tree));
  }
}

TEST_CASE("strategy text format round trips") {
  const char* texts[] = {
      "(u _ (1 (u _ (1 (1 1)))))",
      "(f _ (1 (tt 0)) (ff (tt 1)))",
      "(^1 (a^0 0))",
      "((?•,x) _ (?3 (!5 0)))",
      "(x.{0} _ (0.{0} (✠ _)))",
  };
  for (const char* t : texts) {
    Rooted r = parse_strategy(t);
    CHECK(strategy_str(r) == t);
  }
  Program p = parse_program("(x _) [x <- (z _), y^2 <- (1 0)]");
  CHECK(p.psi.entries.size() == 2);
  CHECK(p.psi.entries.at(Move::named("y")).root_binders == 2);
}

TEST_CASE("stamp monotonicity on machine-produced positions") {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    auto rc = random_case(seed);
    Arena arena(rc.phi, rc.psi);
    auto run = gam_run(arena, GamOptions{100000, false});
    for (const auto& it : run.items) {
      long last = 0;
      for (const Seat* s : pos_seats(it.pos)) {
        if (s->player) continue;
        CHECK(s->stamp > last);
        last = s->stamp;
      }
    }
  }
}

TEST_CASE("determinism: no query in a compiled strategy has two answers") {
  // by construction branch keys are unique; spot-check sorted uniqueness
  auto c = lam::compile_program(
      lam::Parsed{lam::parse_term("u (\\x. u (\\y. x))"), {}});
  std::function<void(const StrategyPtr&)> walk_all =
      [&](const StrategyPtr& n) {
        for (std::size_t i = 1; i < n->kids().size(); ++i)
          CHECK(n->kids()[i - 1].key < n->kids()[i].key);
        for (const Branch& b : n->kids()) walk_all(b.sub);
      };
  walk_all(c.phi.tree);
}
