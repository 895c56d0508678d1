#include "abt/extensions/strong.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace abt {

std::string composite_str(const Composite& r) {
  std::ostringstream out;
  for (const CompMove& m : r) {
    if (m.player) {
      out << '[' << m.move.str() << '|';
      if (m.free_ptr)
        out << '_';
      else
        out << '@' << m.stamp;
      out << ']';
    } else {
      out << '<' << m.move.str() << '@' << m.stamp << '>';
    }
  }
  return out.str();
}

std::optional<Move> ScriptPilot::raise(const Composite&,
                                       const std::vector<Move>& available) {
  if (next >= script.size()) return std::nullopt;
  Move m = script[next++];
  if (strict &&
      std::find(available.begin(), available.end(), m) == available.end())
    throw IllegalQuery("scripted query " + m.str() + " at step " +
                       std::to_string(next) + " is outside the domain");
  return m;
}

namespace {

struct SState {
  std::vector<StrongItem> items;
  Composite comp;
  bool bang = false;
  int raised = 0;  // queries raised along this path
};

struct Stepper {
  Arena& arena;
  const StrongOptions& opts;

  const StrongItem* at(const std::vector<StrongItem>& items, Stage s) const {
    auto i = s.index();
    return i < items.size() ? &items[i] : nullptr;
  }

  // Available queries at a !-state: the branches of the owner tree under
  // the head response, plus the η alphabet.
  std::vector<Move> available(const SState& s) {
    const StrongItem& head = s.items.back();
    auto keys = arena.branch_keys(opp_path(head.pos));
    for (const Move& m : opts.extra_moves)
      if (std::find(keys.begin(), keys.end(), m) == keys.end())
        keys.push_back(m);
    return keys;
  }

  // Raise query a under the head response (rule (?)^s_χ).
  void raise(SState& s, const Move& a) {
    StrongItem head = s.items.back();
    Stage next = head.stage.next();  // a plain stage
    s.items.push_back(StrongItem{next, extend_opp(head.pos, a, next.n),
                                 head.side, "(?)", 0});
    s.comp.push_back(CompMove{false, a, next.n, false});
    s.bang = false;
  }

  // One machine transition from a ?-state. Returns true while running;
  // on false, `end` says why (bang-state, blocked, or halt of the path).
  enum class Outcome { stepped, bang, blocked };

  Outcome step(SState& s) {
    if (s.items.empty()) {
      s.items.push_back(StrongItem{Stage::plain(1),
                                   extend_opp(nullptr, Move::bullet(), 1), 0,
                                   "(1)", 0});
      s.comp.push_back(CompMove{false, Move::bullet(), 1, false});
      return Outcome::stepped;
    }
    const StrongItem head = s.items.back();
    Stage next = head.stage.next();

    if (!head.stage.star) {
      auto path = opp_path(head.pos);
      auto ans = arena.answer(path);
      if (!ans) return Outcome::blocked;
      s.items.push_back(StrongItem{
          next, extend_player(head.pos, ans->move, ans->ptr), head.side,
          ans->eta_level ? "(n*)_eta" : "(n*)", ans->eta_level});
      return Outcome::stepped;
    }

    Move a = head.pos->move;
    Pointer k = head.pos->ptr;
    if (k.is_free()) {
      if (arena.hooked(a)) {
        // rule (n)_f: hook the entry on the opposite side
        s.items.push_back(StrongItem{next, extend_opp(nullptr, a, next.n),
                                     1 - head.side, "(n)_f", 0});
        return Outcome::stepped;
      }
      // rule (!)_f: a visible free answer
      s.comp.push_back(CompMove{true, a, 0, true});
      return Outcome::bang;
    }
    Pos q = head.pos->prev;
    long m = pop_dnumber(q, k.off);
    if (m == 1) {
      // the answer to the composite root (only φ-side can reach it)
      s.comp.push_back(CompMove{true, a, 1, false});
      return Outcome::bang;
    }
    auto idx = Stage::starred(m).index();
    if (idx >= s.items.size())
      throw MalformedState("pop landed on a missing stage");
    const StrongItem& tgt = s.items[idx];
    if (tgt.side != head.side) {
      // hidden: the interaction continues on the other side
      s.items.push_back(StrongItem{next, extend_opp(tgt.pos, a, next.n),
                                   tgt.side, "(n)_b", 0});
      return Outcome::stepped;
    }
    // visible: an answer inside the composition, by address
    s.comp.push_back(CompMove{true, a, m, false});
    return Outcome::bang;
  }
};

}  // namespace

StrongRun strong_run(Arena& arena, Pilot& pilot, const StrongOptions& opts) {
  Stepper st{arena, opts};
  SState s;
  StrongRun out;
  long fuel = opts.fuel;
  while (true) {
    if (fuel-- <= 0) {
      out.end = StrongRun::End::fuel;
      break;
    }
    if (s.bang) {
      std::optional<Move> a;
      try {
        a = pilot.raise(s.comp, st.available(s));
      } catch (const IllegalQuery& e) {
        out.end = StrongRun::End::illegal;
        out.note = e.what();
        break;
      }
      if (!a) {
        out.end = StrongRun::End::done;
        break;
      }
      st.raise(s, *a);
      continue;
    }
    auto o = st.step(s);
    if (o == Stepper::Outcome::bang) {
      out.responses.push_back(s.comp);
      s.bang = true;
    } else if (o == Stepper::Outcome::blocked) {
      out.end = StrongRun::End::blocked;
      break;
    }
  }
  out.items = std::move(s.items);
  return out;
}

StrongRun strong_run_exhaustive(const Rooted& phi, const CounterStrategy& psi,
                                int depth, const StrongOptions& opts) {
  Arena arena(phi, psi);
  Stepper st{arena, opts};
  StrongRun out;
  long fuel = opts.fuel;

  std::deque<SState> queue;
  queue.push_back(SState{});
  while (!queue.empty()) {
    SState s = std::move(queue.front());
    queue.pop_front();
    // run this fork to its next !-state
    bool alive = true;
    while (alive && !s.bang) {
      if (fuel-- <= 0) {
        out.end = StrongRun::End::fuel;
        return out;
      }
      auto o = st.step(s);
      if (o == Stepper::Outcome::bang) {
        out.responses.push_back(s.comp);
        s.bang = true;
      } else if (o == Stepper::Outcome::blocked) {
        alive = false;  // a blocked fork contributes nothing
      }
    }
    if (!alive) continue;
    if (s.raised >= depth) continue;
    for (const Move& a : st.available(s)) {
      SState fork = s;
      fork.raised++;
      st.raise(fork, a);
      queue.push_back(std::move(fork));
    }
  }
  return out;
}

// ---------------------------------------------------------------------
// Reading back the composition

namespace {
struct RNode {
  bool answered = false;
  Move amove;
  Pointer aptr;
  std::map<Move, RNode> kids;
};

Pointer address_to_offset(const Composite& r, std::size_t player_at) {
  const CompMove& pm = r[player_at];
  if (pm.free_ptr) return Pointer::free();
  long off = 0;
  for (std::size_t j = player_at; j-- > 0;) {
    if (r[j].player) continue;
    if (r[j].stamp == pm.stamp) return Pointer::bound(off);
    ++off;
  }
  throw DanglingAddress("composite address " + std::to_string(pm.stamp) +
                        " points at no opponent move");
}

StrategyPtr freeze(const RNode& n) {
  std::vector<Branch> kids;
  for (const auto& [mv, sub] : n.kids) {
    if (!sub.answered)
      throw MalformedState("readback of an unanswered composite query");
    kids.push_back(Branch{mv, -1, freeze(sub)});
  }
  return make_node(n.amove, n.aptr, std::move(kids));
}
}  // namespace

std::vector<GamItem> strong_ledger(const StrongRun& run) {
  std::vector<GamItem> items;
  items.reserve(run.items.size());
  for (const StrongItem& it : run.items)
    items.push_back(GamItem{it.stage, it.pos, it.rule, 0, it.eta_level});
  return items;
}

Rooted readback_composition(const std::vector<Composite>& responses) {
  RNode root;
  for (const Composite& r : responses) {
    if (r.empty() || r.back().player == false)
      throw MalformedState("composite response expected");
    RNode* node = &root;
    for (std::size_t i = 1; i + 1 < r.size(); ++i) {
      if (r[i].player) continue;
      node = &node->kids[r[i].move];
    }
    Move amove = r.back().move;
    Pointer aptr = address_to_offset(r, r.size() - 1);
    if (node->answered && (node->amove != amove || node->aptr != aptr))
      throw MalformedState("nondeterministic composite answers");
    node->answered = true;
    node->amove = amove;
    node->aptr = aptr;
  }
  if (!root.answered)
    throw MalformedState("the composition answered no query");
  return Rooted{freeze(root), -1};
}

}  // namespace abt
