#include "abt/machines/gam.hpp"

namespace abt {

namespace {
std::string star_rule_name(Stage s, bool star_mode, int eta) {
  std::string base;
  if (star_mode)
    base = "(n*)";
  else
    base = (s.n % 2 == 0) ? "(2n*)" : "(2n+1*)";
  if (eta > 0) base += "_eta";
  return base;
}

std::string plain_rule_name(Stage s, bool star_mode, char variant) {
  if (star_mode) return variant == 's' ? "(n)_*" : "(n)";
  if (variant == 'f') return (s.n % 2 == 0) ? "(2n)_f" : "(2n+1)_f";
  return (s.n % 2 == 0) ? "(2n)_b" : "(2n+1)";
}
}  // namespace

std::optional<Termination> gam_step(GamState& s, Arena& arena,
                                    const GamOptions& opts) {
  auto& items = s.items;
  if (items.empty()) {
    items.push_back(GamItem{Stage::plain(1),
                            extend_opp(nullptr, Move::bullet(), 1), "(1)"});
    return std::nullopt;
  }
  const GamItem head = items.back();
  Stage next = head.stage.next();

  if (!head.stage.star) {
    // A query was reached; the due strategy answers it, or the query is
    // outside its domain and the machine blocks.
    auto path = opp_path(head.pos);
    auto ans = arena.answer(path);
    if (!ans) {
      Stage at = items.size() >= 2 ? items[items.size() - 2].stage
                                   : head.stage;
      return Termination::blocked(path, at);
    }
    items.push_back(GamItem{next, extend_player(head.pos, ans->move, ans->ptr),
                            star_rule_name(next, opts.star, ans->eta_level), 0,
                            ans->eta_level});
    return std::nullopt;
  }

  // The head is a response q[a|k]; place the next opponent move.
  Move a = head.pos->move;
  Pointer k = head.pos->ptr;
  if (k.is_free()) {
    if (opts.star && a.is_star()) {
      items.push_back(GamItem{next, extend_opp(head.pos, Move::star(), next.n),
                              plain_rule_name(next, opts.star, 's')});
      return std::nullopt;
    }
    if (arena.hooked(a)) {
      items.push_back(GamItem{next, extend_opp(nullptr, a, next.n),
                              plain_rule_name(next, opts.star, 'f')});
      return std::nullopt;
    }
    // Free move nobody binds: the machine's result.
    return Termination::free_answer(a, head.stage);
  }
  Pos q = head.pos->prev;
  long m = pop_dnumber(q, k.off);
  if (m == 1) return Termination::answer(a, head.stage);
  auto idx = Stage::starred(m).index();
  if (idx >= items.size())
    throw MalformedState("pop landed on a missing stage " +
                         Stage::starred(m).str());
  const GamItem& tgt = items[idx];
  items.push_back(GamItem{next, extend_opp(tgt.pos, a, next.n),
                          plain_rule_name(next, opts.star, 'b'), m});
  return std::nullopt;
}

GamRun gam_run(Arena& arena, const GamOptions& opts) {
  GamState s;
  long fuel = opts.fuel;
  while (true) {
    if (fuel-- <= 0) {
      GamRun out{std::move(s.items), Termination::fuel({})};
      out.term.at = out.items.empty() ? Stage::plain(1)
                                      : out.items.back().stage;
      return out;
    }
    auto t = gam_step(s, arena, opts);
    if (t) return GamRun{std::move(s.items), *t};
  }
}

GamRun gam_run(const Rooted& phi, const CounterStrategy& psi, long fuel) {
  Arena arena(phi, psi);
  GamOptions opts;
  opts.fuel = fuel;
  return gam_run(arena, opts);
}

GamRun gam_star_run(const Rooted& chi, long fuel) {
  Arena arena(chi, CounterStrategy{});
  GamOptions opts;
  opts.fuel = fuel;
  opts.star = true;
  return gam_run(arena, opts);
}

GamEtaRun gam_eta_run(const Rooted& phi, const CounterStrategy& psi,
                      long fuel) {
  Arena arena(phi, psi, EtaMode::on);
  GamOptions opts;
  opts.fuel = fuel;
  GamEtaRun out{gam_run(arena, opts), arena.render_expanded()};
  return out;
}

Termination classify_termination(const GamState& s, Arena& arena,
                                 const GamOptions& opts) {
  GamState copy = s;
  auto t = gam_step(copy, arena, opts);
  if (!t) throw MalformedState("state is not final: a rule still fires");
  return *t;
}

Termination classify_termination(const GamRun& run) { return run.term; }

}  // namespace abt
