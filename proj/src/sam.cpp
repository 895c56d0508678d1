#include "abt/machines/sam.hpp"

#include <sstream>

namespace abt {

SamQPtr sam_bullet() {
  auto q = std::make_shared<SamQ>();
  q->bullet = true;
  return q;
}

SamQPtr sam_open(Move a, SamRPtr ann) {
  auto q = std::make_shared<SamQ>();
  q->move = std::move(a);
  q->ann = std::move(ann);
  return q;
}

SamQPtr sam_extend(SamRPtr prefix, Move a, SamRPtr ann) {
  auto q = std::make_shared<SamQ>();
  q->prefix = std::move(prefix);
  q->move = std::move(a);
  q->ann = std::move(ann);
  return q;
}

SamRPtr sam_answer(SamQPtr q, Move a, Pointer k) {
  auto r = std::make_shared<SamR>();
  r->q = std::move(q);
  r->move = std::move(a);
  r->ptr = k;
  return r;
}

namespace {
bool samq_equal(const SamQPtr& a, const SamQPtr& b);
bool samr_equal(const SamRPtr& a, const SamRPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->move == b->move && a->ptr == b->ptr && samq_equal(a->q, b->q);
}
bool samq_equal(const SamQPtr& a, const SamQPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->bullet != b->bullet) return false;
  if (a->bullet) return true;
  return a->move == b->move && samr_equal(a->prefix, b->prefix) &&
         samr_equal(a->ann, b->ann);
}
}  // namespace

bool sam_equal(const SamState& a, const SamState& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<SamQPtr>(a))
    return samq_equal(std::get<SamQPtr>(a), std::get<SamQPtr>(b));
  return samr_equal(std::get<SamRPtr>(a), std::get<SamRPtr>(b));
}

std::vector<Move> sam_opp_path(const SamQPtr& q) {
  std::vector<Move> out;
  const SamQ* cur = q.get();
  while (cur) {
    out.push_back(cur->bullet ? Move::bullet() : cur->move);
    cur = cur->prefix ? cur->prefix->q.get() : nullptr;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

namespace {
Pos erase_q(const SamQ* q);
Pos erase_r(const SamR* r) {
  return extend_player(erase_q(r->q.get()), r->move, r->ptr);
}
Pos erase_q(const SamQ* q) {
  if (q->bullet) return extend_opp(nullptr, Move::bullet(), 0);
  Pos pre = q->prefix ? erase_r(q->prefix.get()) : nullptr;
  return extend_opp(pre, q->move, 0);
}

void str_q(const SamQ* q, std::ostringstream& out);
void str_r(const SamR* r, std::ostringstream& out) {
  str_q(r->q.get(), out);
  out << '[' << r->move.str() << '|' << r->ptr.str() << ']';
}
void str_q(const SamQ* q, std::ostringstream& out) {
  if (q->bullet) {
    out << "•";
    return;
  }
  if (q->prefix) str_r(q->prefix.get(), out);
  out << '<' << q->move.str() << ',';
  str_r(q->ann.get(), out);
  out << '>';
}
}  // namespace

Pos sam_erase(const SamState& s) {
  if (std::holds_alternative<SamQPtr>(s))
    return erase_q(std::get<SamQPtr>(s).get());
  return erase_r(std::get<SamRPtr>(s).get());
}

std::string sam_str(const SamState& s) {
  std::ostringstream out;
  if (std::holds_alternative<SamQPtr>(s))
    str_q(std::get<SamQPtr>(s).get(), out);
  else
    str_r(std::get<SamRPtr>(s).get(), out);
  return out.str();
}

std::optional<SamRPtr> sam_dnumber(const SamQPtr& q) {
  if (q->bullet) return std::nullopt;
  return q->ann;
}

SamQPtr sam_pop(const SamQPtr& q) {
  if (q->bullet || !q->prefix)
    throw PointerOutOfRange("pop past the root of a nested position");
  return q->prefix->q;
}

SamQPtr sam_pop_n(const SamQPtr& q, long i) {
  SamQPtr cur = q;
  for (; i > 0; --i) cur = sam_pop(cur);
  return cur;
}

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

std::optional<Termination> sam_step(std::vector<SamStep>& steps, Arena& arena,
                                    const SamOptions& opts) {
  if (steps.empty()) {
    steps.push_back(SamStep{Stage::plain(1), sam_bullet(), "(1)"});
    return std::nullopt;
  }
  const SamStep head = steps.back();
  Stage next = head.stage.next();

  if (!head.stage.star) {
    SamQPtr q = std::get<SamQPtr>(head.state);
    auto path = sam_opp_path(q);
    auto ans = arena.answer(path);
    if (!ans) {
      Stage at = steps.size() >= 2 ? steps[steps.size() - 2].stage
                                   : head.stage;
      return Termination::blocked(path, at);
    }
    steps.push_back(SamStep{next, sam_answer(q, ans->move, ans->ptr),
                            star_rule_name(next, opts.star)});
    return std::nullopt;
  }

  SamRPtr r = std::get<SamRPtr>(head.state);
  Move a = r->move;
  Pointer k = r->ptr;
  if (k.is_free()) {
    if (opts.star && a.is_star()) {
      steps.push_back(SamStep{next, sam_extend(r, Move::star(), r),
                              plain_rule_name(next, opts.star, 's')});
      return std::nullopt;
    }
    if (arena.hooked(a)) {
      steps.push_back(SamStep{next, sam_open(a, r),
                              plain_rule_name(next, opts.star, 'f')});
      return std::nullopt;
    }
    return Termination::free_answer(a, head.stage);
  }
  SamQPtr popped = sam_pop_n(r->q, k.off);
  auto ann = sam_dnumber(popped);
  if (!ann) return Termination::answer(a, head.stage);
  steps.push_back(SamStep{next, sam_extend(*ann, a, r),
                          plain_rule_name(next, opts.star, 'b')});
  return std::nullopt;
}

SamRun sam_run(Arena& arena, const SamOptions& opts) {
  std::vector<SamStep> steps;
  long fuel = opts.fuel;
  while (true) {
    if (fuel-- <= 0) {
      Termination t = Termination::fuel(
          steps.empty() ? Stage::plain(1) : steps.back().stage);
      return SamRun{std::move(steps), t};
    }
    auto t = sam_step(steps, arena, opts);
    if (t) return SamRun{std::move(steps), *t};
  }
}

SamRun sam_run(const Rooted& phi, const CounterStrategy& psi, long fuel) {
  Arena arena(phi, psi);
  SamOptions opts;
  opts.fuel = fuel;
  return sam_run(arena, opts);
}

}  // namespace abt
