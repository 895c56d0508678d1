#include "abt/machines/vam.hpp"

namespace abt {

long vam_jump(const VamState& s, long i, long n) {
  long cur = n;
  while (i > 0) {
    if (cur <= 1)
      throw PointerOutOfRange("jump past the initial move");
    const VamItem* it = s.at(Stage::plain(cur));
    if (!it) throw MalformedState("jump into a missing stage");
    if (it->kind != VamItem::Kind::jump)
      throw PointerOutOfRange("jump from an item without a continuation");
    cur = it->jump_to - 1;
    --i;
  }
  return cur;
}

namespace {
Pos dview_rec(const VamState& s, long n, bool stamps) {
  const VamItem* it = s.at(Stage::plain(n));
  if (!it) throw MalformedState("view of a missing stage");
  switch (it->kind) {
    case VamItem::Kind::bullet:
      return extend_opp(nullptr, Move::bullet(), stamps ? 1 : 0);
    case VamItem::Kind::bare:
      return extend_opp(nullptr, it->move, stamps ? n : 0);
    case VamItem::Kind::jump: {
      Pos pre = dview_rec(s, it->jump_to - 1, stamps);
      const VamItem* pl = s.at(Stage::starred(it->jump_to));
      if (!pl || pl->kind != VamItem::Kind::player)
        throw MalformedState("jump target is not a player item");
      pre = extend_player(pre, pl->move, pl->ptr);
      return extend_opp(pre, it->move, stamps ? n : 0);
    }
    default:
      throw MalformedState("view of a player item");
  }
}
}  // namespace

Pos vam_view(const VamState& s, long n) { return dview_rec(s, n, false); }
Pos vam_dview(const VamState& s, long n) { return dview_rec(s, n, true); }

namespace {
std::string star_rule_name(Stage st, bool star_mode) {
  if (star_mode) return "(n*)";
  return (st.n % 2 == 0) ? "(2n*)" : "(2n+1*)";
}
std::string plain_rule_name(Stage st, bool star_mode, char variant) {
  if (star_mode) return variant == 's' ? "(n)_*" : "(n)";
  if (variant == 'f') return (st.n % 2 == 0) ? "(2n)_f" : "(2n+1)_f";
  return (st.n % 2 == 0) ? "(2n)_b" : "(2n+1)";
}
}  // namespace

std::optional<Termination> vam_step(VamState& s, Arena& arena,
                                    const VamOptions& opts) {
  auto& items = s.items;
  if (items.empty()) {
    items.push_back(VamItem{VamItem::Kind::bullet, Stage::plain(1),
                            Move::bullet(), Pointer::free(), 0, "(1)"});
    return std::nullopt;
  }
  const VamItem head = items.back();
  Stage next = head.stage.next();

  if (!head.stage.star) {
    Pos view = vam_view(s, head.stage.n);
    auto path = opp_path(view);
    auto ans = arena.answer(path);
    if (!ans) {
      Stage at = items.size() >= 2 ? items[items.size() - 2].stage
                                   : head.stage;
      return Termination::blocked(path, at);
    }
    items.push_back(VamItem{VamItem::Kind::player, next, ans->move, ans->ptr,
                            0, star_rule_name(next, opts.star)});
    return std::nullopt;
  }

  Move a = head.move;
  Pointer k = head.ptr;
  if (k.is_free()) {
    if (opts.star && a.is_star()) {
      items.push_back(VamItem{VamItem::Kind::jump, next, a, Pointer::free(),
                              head.stage.n,
                              plain_rule_name(next, opts.star, 's')});
      return std::nullopt;
    }
    if (arena.hooked(a)) {
      items.push_back(VamItem{VamItem::Kind::bare, next, a, Pointer::free(),
                              0, plain_rule_name(next, opts.star, 'f')});
      return std::nullopt;
    }
    return Termination::free_answer(a, head.stage);
  }
  long m = vam_jump(s, k.off, head.stage.n - 1);
  if (m == 1) return Termination::answer(a, head.stage);
  items.push_back(VamItem{VamItem::Kind::jump, next, a, Pointer::free(), m,
                          plain_rule_name(next, opts.star, 'b')});
  return std::nullopt;
}

VamRun vam_run(Arena& arena, const VamOptions& opts) {
  VamState s;
  long fuel = opts.fuel;
  while (true) {
    if (fuel-- <= 0) {
      Termination t = Termination::fuel(
          s.items.empty() ? Stage::plain(1) : s.items.back().stage);
      return VamRun{std::move(s), t};
    }
    auto t = vam_step(s, arena, opts);
    if (t) return VamRun{std::move(s), *t};
  }
}

VamRun vam_run(const Rooted& phi, const CounterStrategy& psi, long fuel) {
  Arena arena(phi, psi);
  VamOptions opts;
  opts.fuel = fuel;
  return vam_run(arena, opts);
}

}  // namespace abt
