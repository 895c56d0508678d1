#include "abt/equivalence.hpp"

#include <map>
#include <random>
#include <sstream>

namespace abt {

// ---------------------------------------------------------------------
// VAM <-> GAM

GamState vam_to_gam(const VamState& v) {
  GamState g;
  for (const VamItem& it : v.items) {
    switch (it.kind) {
      case VamItem::Kind::bullet:
        g.items.push_back(GamItem{Stage::plain(1),
                                  extend_opp(nullptr, Move::bullet(), 1),
                                  "(1)"});
        break;
      case VamItem::Kind::player: {
        if (g.items.empty()) throw Unreachable("player item first");
        Pos q = g.items[Stage::plain(it.stage.n - 1).index()].pos;
        g.items.push_back(
            GamItem{it.stage, extend_player(q, it.move, it.ptr), "tr"});
        break;
      }
      case VamItem::Kind::bare:
      case VamItem::Kind::jump: {
        g.items.push_back(
            GamItem{it.stage, vam_dview(v, it.stage.n), "tr"});
        break;
      }
    }
  }
  return g;
}

VamState gam_to_vam(const GamState& g) {
  VamState v;
  for (const GamItem& it : g.items) {
    if (it.stage == Stage::plain(1)) {
      v.items.push_back(VamItem{VamItem::Kind::bullet, it.stage,
                                Move::bullet(), Pointer::free(), 0, "(1)"});
      continue;
    }
    if (it.stage.star) {
      v.items.push_back(VamItem{VamItem::Kind::player, it.stage,
                                it.pos->move, it.pos->ptr, 0, "tr"});
      continue;
    }
    // a plain item <r'<a@n>>
    if (!it.pos->prev) {
      v.items.push_back(VamItem{VamItem::Kind::bare, it.stage, it.pos->move,
                                Pointer::free(), 0, "tr"});
      continue;
    }
    const GamItem& answer = g.items[Stage::starred(it.stage.n).index()];
    if (!answer.pos->ptr.is_bound()) {
      // only the GAM* indirection extends a free answer; it jumps to its
      // own stage
      if (it.pos->move.is_star() && answer.pos->move.is_star() &&
          pos_equal(answer.pos, it.pos->prev)) {
        v.items.push_back(VamItem{VamItem::Kind::jump, it.stage,
                                  it.pos->move, Pointer::free(), it.stage.n,
                                  "tr"});
        continue;
      }
      throw Unreachable("plain item without a bound answer");
    }
    Pos q = g.items[Stage::plain(it.stage.n - 1).index()].pos;
    long m = pop_dnumber(q, answer.pos->ptr.off);
    v.items.push_back(VamItem{VamItem::Kind::jump, it.stage, it.pos->move,
                              Pointer::free(), m, "tr"});
  }
  return v;
}

// ---------------------------------------------------------------------
// GAM <-> SAM

std::vector<SamState> gam_to_sam(const GamState& g) {
  std::vector<SamState> out;
  for (const GamItem& it : g.items) {
    if (it.stage == Stage::plain(1)) {
      out.push_back(SamQPtr(sam_bullet()));
      continue;
    }
    if (it.stage.star) {
      SamQPtr q = std::get<SamQPtr>(out[Stage::plain(it.stage.n - 1).index()]);
      out.push_back(sam_answer(q, it.pos->move, it.pos->ptr));
      continue;
    }
    SamRPtr head = std::get<SamRPtr>(out[Stage::starred(it.stage.n).index()]);
    if (!it.pos->prev) {
      out.push_back(sam_open(it.pos->move, head));
      continue;
    }
    const GamItem& answer = g.items[Stage::starred(it.stage.n).index()];
    if (!answer.pos->ptr.is_bound()) {
      if (it.pos->move.is_star() && answer.pos->move.is_star() &&
          pos_equal(answer.pos, it.pos->prev)) {
        out.push_back(sam_extend(head, Move::star(), head));
        continue;
      }
      throw Unreachable("plain item without a bound answer");
    }
    Pos q = g.items[Stage::plain(it.stage.n - 1).index()].pos;
    long m = pop_dnumber(q, answer.pos->ptr.off);
    SamRPtr target = std::get<SamRPtr>(out[Stage::starred(m).index()]);
    out.push_back(sam_extend(target, it.pos->move, head));
  }
  return out;
}

namespace {

struct SgBuilder {
  std::map<const void*, Stage> stages;
  std::map<std::size_t, Pos> items;

  Stage number_q(const SamQPtr& q) {
    auto it = stages.find(q.get());
    if (it != stages.end()) return it->second;
    Stage s;
    if (q->bullet) {
      s = Stage::plain(1);
      place(s, extend_opp(nullptr, Move::bullet(), 1));
    } else if (!q->prefix) {
      Stage ra = number_r(q->ann);
      if (!ra.star) throw Unreachable("annotation with a plain number");
      s = Stage::plain(ra.n);
      place(s, extend_opp(nullptr, q->move, s.n));
    } else {
      Stage rp = number_r(q->prefix);
      Stage ra = number_r(q->ann);
      if (!ra.star) throw Unreachable("annotation with a plain number");
      s = Stage::plain(ra.n);
      Pos base = items.at(rp.index());
      place(s, extend_opp(base, q->move, s.n));
    }
    stages[q.get()] = s;
    return s;
  }

  Stage number_r(const SamRPtr& r) {
    auto it = stages.find(r.get());
    if (it != stages.end()) return it->second;
    Stage qs = number_q(r->q);
    if (qs.star) throw Unreachable("query with a starred number");
    Stage s = Stage::starred(qs.n + 1);
    Pos base = items.at(qs.index());
    place(s, extend_player(base, r->move, r->ptr));
    stages[r.get()] = s;
    return s;
  }

  void place(Stage s, Pos p) {
    auto [it, inserted] = items.emplace(s.index(), p);
    if (!inserted && !pos_equal(it->second, p))
      throw Unreachable("two substates claim stage " + s.str());
  }

  GamState finish(Stage last) {
    GamState g;
    for (std::size_t i = 0; i <= last.index(); ++i) {
      auto it = items.find(i);
      if (it == items.end())
        throw Unreachable("missing stage " + Stage::at_index(i).str());
      g.items.push_back(GamItem{Stage::at_index(i), it->second, "tr"});
    }
    return g;
  }
};

}  // namespace

GamState sam_to_gam(const SamState& s) {
  SgBuilder b;
  Stage last = std::holds_alternative<SamQPtr>(s)
                   ? b.number_q(std::get<SamQPtr>(s))
                   : b.number_r(std::get<SamRPtr>(s));
  return b.finish(last);
}

Stage sam_step_number(const SamState& s) {
  SgBuilder b;
  return std::holds_alternative<SamQPtr>(s)
             ? b.number_q(std::get<SamQPtr>(s))
             : b.number_r(std::get<SamRPtr>(s));
}

// ---------------------------------------------------------------------
// SAM -> EAM

namespace {

SpecEnvPtr spec_top(const EamProgram& prog) {
  auto t = std::make_shared<SpecEnv>();
  t->top = true;
  t->binder = prog.main.root_binder;
  return t;
}

struct SeBuilder {
  const EamProgram& prog;
  SpecEnvPtr top;
  std::map<const void*, SpecEamState> memo;

  // Enter a closure exactly as the machine does (empty-branch shortcut
  // for binderless closures included).
  SpecEamState enter(const CNode* body, const std::string& binder,
                     SpecEnvPtr closure_env, const CNode* call,
                     SpecEnvPtr call_env) {
    if (call->kids().empty() && !call->has_gen() &&
        !spec_binder_used(body, binder))
      return SpecEamState{body, closure_env};
    auto f = std::make_shared<SpecEnv>();
    f->binder = binder;
    f->call = call;
    f->call_env = std::move(call_env);
    f->parent = std::move(closure_env);
    return SpecEamState{body, f};
  }

  static bool spec_binder_used(const CNode* n, const std::string& b) {
    if (n->hbind == b) return true;
    if (n->has_gen()) return true;
    for (const CBranch& k : n->kids())
      if (spec_binder_used(k.sub.get(), b)) return true;
    return false;
  }

  SpecEamState query(const SamQPtr& q) {
    auto it = memo.find(q.get());
    if (it != memo.end()) return it->second;
    SpecEamState out;
    if (q->bullet) {
      out = SpecEamState{prog.main.root.get(), top};
    } else if (!q->prefix) {
      const CTree* e = prog.entry(q->move);
      if (!e) throw Unreachable("hooked move without an entry");
      SpecEamState call = response(q->ann);
      out = enter(e->root.get(), e->root_binder, top, call.code, call.env);
    } else {
      SpecEamState target = response(q->prefix);
      const CBranch* br = target.code->child(q->move);
      if (!br) throw Unreachable("SE: branch missing at the target");
      SpecEamState call = response(q->ann);
      out = enter(br->sub.get(), br->binder, target.env, call.code,
                  call.env);
    }
    memo[q.get()] = out;
    return out;
  }

  // SE of a response is the state of its query; the response's player
  // move is the head of that state's code.
  SpecEamState response(const SamRPtr& r) {
    SpecEamState st = query(r->q);
    if (st.code->head != r->move)
      throw Unreachable("SE: code head differs from the response move");
    return st;
  }
};

}  // namespace

SpecEamState sam_to_eam(const SamQPtr& q, const EamProgram& prog) {
  SeBuilder b{prog, spec_top(prog), {}};
  return b.query(q);
}

bool spec_env_matches(const SpecEnvPtr& s, const EamFrame* f) {
  if (!s && !f) return true;
  if (!s || !f) return false;
  if (s->top != f->top || s->binder != f->binder) return false;
  if (s->top) return true;
  if (s->call != f->call) return false;
  return spec_env_matches(s->call_env, f->call_env) &&
         spec_env_matches(s->parent, f->parent);
}

AcResult trad_ac(Pos position, const EamProgram& prog) {
  if (!position) throw Unreachable("ac of an empty position");
  auto seats = pos_seats(position);
  AcResult cur;
  std::string pending_binder;
  for (std::size_t i = 0; i < seats.size(); ++i) {
    const Seat* s = seats[i];
    if (i == 0) {
      if (s->player) throw Unreachable("position starts with a player move");
      if (s->move.is_bullet()) {
        cur.code = prog.main.root.get();
        pending_binder = prog.main.root_binder;
      } else {
        const CTree* e = prog.entry(s->move);
        if (!e) throw Unreachable("ac: no entry for the root move");
        cur.code = e->root.get();
        pending_binder = e->root_binder;
      }
      continue;
    }
    if (s->player) {
      // (λx.P) enters its block: L grows
      cur.binders.insert(cur.binders.begin(), pending_binder);
      if (cur.code->head != s->move)
        throw Unreachable("ac: head mismatch along the position");
      continue;
    }
    const CBranch* br = cur.code->child(s->move);
    if (!br) throw Unreachable("ac: missing branch along the position");
    cur.code = br->sub.get();
    pending_binder = br->binder;
  }
  return cur;
}

// ---------------------------------------------------------------------
// Lock-step checking

namespace {

std::string stage_note(const char* what, const std::string& a,
                       const std::string& b) {
  return std::string(what) + ": " + a + " vs " + b;
}

bool gam_items_equal(const GamItem& a, const GamItem& b) {
  return a.stage == b.stage && pos_equal(a.pos, b.pos);
}

bool vam_items_equal(const VamItem& a, const VamItem& b) {
  if (!(a.stage == b.stage) || a.kind != b.kind) return false;
  switch (a.kind) {
    case VamItem::Kind::bullet:
      return true;
    case VamItem::Kind::player:
      return a.move == b.move && a.ptr == b.ptr;
    case VamItem::Kind::bare:
      return a.move == b.move;
    case VamItem::Kind::jump:
      return a.move == b.move && a.jump_to == b.jump_to;
  }
  return false;
}

}  // namespace

std::vector<Divergence> compare_ledgers(const std::vector<GamItem>& a,
                                        const std::vector<GamItem>& b) {
  std::vector<Divergence> out;
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!gam_items_equal(a[i], b[i]))
      out.push_back(Divergence{a[i].stage, "ledger",
                               stage_note("item", pos_str(a[i].pos),
                                          pos_str(b[i].pos))});
  if (a.size() != b.size())
    out.push_back(Divergence{Stage::at_index(n), "ledger",
                             "ledger lengths differ"});
  return out;
}

CaseReport check_lockstep(const std::string& name, const Rooted& phi,
                          const CounterStrategy& psi, const EamProgram& eam,
                          const LockstepOptions& opts) {
  CaseReport rep;
  rep.name = name;
  auto diverge = [&rep](Stage s, const char* where, std::string detail) {
    rep.divergences.push_back(Divergence{s, where, std::move(detail)});
  };

  EtaMode eta = opts.eta ? EtaMode::on : EtaMode::off;
  GamOptions go{opts.fuel, opts.star};
  Arena ga(phi, psi, eta);
  GamRun g = gam_run(ga, go);
  rep.stages = static_cast<long>(g.items.size());
  rep.halt_stage = g.term.at;

  // --- VAM
  if (opts.with_vam) {
    Arena va(phi, psi, eta);
    VamOptions vo{opts.fuel, opts.star};
    VamRun v = vam_run(va, vo);
    if (!v.term.same_class(g.term) ||
        (g.term.kind != Termination::Kind::fuel && !(v.term.at == g.term.at)))
      diverge(g.term.at, "vam/termination",
              stage_note("halt", v.term.str(), g.term.str()));
    if (v.state.items.size() != g.items.size())
      diverge(Stage::plain(1), "vam/length", "stage counts differ");
    std::size_t n = std::min(v.state.items.size(), g.items.size());
    try {
      // per-stage: ⟦VAM⟧^VG = GAM and ⟦GAM⟧^GV = VAM, plus round trips
      GamState gv = vam_to_gam(v.state);
      VamState vg = gam_to_vam(GamState{g.items});
      for (std::size_t i = 0; i < n; ++i) {
        if (!gam_items_equal(gv.items[i], g.items[i]))
          diverge(g.items[i].stage, "vam->gam",
                  stage_note("item", pos_str(gv.items[i].pos),
                             pos_str(g.items[i].pos)));
        if (!vam_items_equal(vg.items[i], v.state.items[i]))
          diverge(g.items[i].stage, "gam->vam", "translated item differs");
      }
      // mutual inverses on reachable states
      GamState rt1 = vam_to_gam(vg);
      VamState rt2 = gam_to_vam(gv);
      for (std::size_t i = 0; i < n; ++i) {
        if (!gam_items_equal(rt1.items[i], g.items[i]))
          diverge(g.items[i].stage, "round-trip GV;VG", "not the identity");
        if (!vam_items_equal(rt2.items[i], v.state.items[i]))
          diverge(g.items[i].stage, "round-trip VG;GV", "not the identity");
      }
      // A.1 claim (1): π'(pop^i(dview(Γ,n))) = jump_i(Γ,n)
      for (const VamItem& it : v.state.items) {
        if (it.stage.star || it.stage.n <= 1) continue;
        Pos dv = vam_dview(v.state, it.stage.n);
        for (long i = 0; i <= 2; ++i) {
          long lhs, rhs;
          try {
            lhs = pop_dnumber(dv, i);
            rhs = vam_jump(v.state, i, it.stage.n);
          } catch (const AbtError&) {
            continue;  // both must fail together; checked by the catch-all
          }
          if (lhs != rhs)
            diverge(it.stage, "view/jump",
                    "view/jump disagree at i=" + std::to_string(i));
        }
      }
      // dview of the translated play equals the ledger position
      for (const GamItem& it : g.items) {
        if (it.stage.star) continue;
        if (!pos_equal(vam_dview(vg, it.stage.n), it.pos))
          diverge(it.stage, "dview", "dview differs from the position");
      }
    } catch (const AbtError& e) {
      diverge(Stage::plain(1), "vam/translation", e.what());
    }
  }

  // --- SAM
  std::vector<SamStep> sam_steps;
  if (opts.with_sam) {
    Arena sa(phi, psi, eta);
    SamOptions so{opts.fuel, opts.star};
    SamRun s = sam_run(sa, so);
    sam_steps = s.steps;
    if (!s.term.same_class(g.term) ||
        (g.term.kind != Termination::Kind::fuel && !(s.term.at == g.term.at)))
      diverge(g.term.at, "sam/termination",
              stage_note("halt", s.term.str(), g.term.str()));
    if (s.steps.size() != g.items.size())
      diverge(Stage::plain(1), "sam/length", "stage counts differ");
    std::size_t n = std::min(s.steps.size(), g.items.size());
    try {
      std::vector<SamState> gs = gam_to_sam(GamState{g.items});
      for (std::size_t i = 0; i < n; ++i) {
        const SamStep& step = s.steps[i];
        if (!sam_equal(gs[i], step.state))
          diverge(step.stage, "gam->sam", "translated state differs");
        // #(σ(ν)) = ν and ⟦σ(ν)⟧^SG = Γ_ν
        if (!(sam_step_number(step.state) == step.stage))
          diverge(step.stage, "step-number", "#(σ(ν)) differs from ν");
        GamState back = sam_to_gam(step.state);
        if (back.items.size() != i + 1) {
          diverge(step.stage, "sam->gam", "ledger length differs");
        } else {
          for (std::size_t j = 0; j <= i; ++j)
            if (!gam_items_equal(back.items[j], g.items[j]))
              diverge(step.stage, "sam->gam", "reconstructed item differs");
        }
        // erase agreement between ledger and nested positions
        if (!pos_equal_erased(sam_erase(step.state), g.items[i].pos))
          diverge(step.stage, "erase", "erased positions differ");
      }
    } catch (const AbtError& e) {
      diverge(Stage::plain(1), "sam/translation", e.what());
    }
  }

  // --- EAM (which has no η rules)
  if (opts.with_eam && !opts.eta) {
    EamOptions eo{opts.fuel, opts.star};
    EamRun e = eam_run(eam, eo);
    if (!e.term.same_class(g.term) ||
        (g.term.kind != Termination::Kind::fuel && !(e.term.at == g.term.at)))
      diverge(g.term.at, "eam/termination",
              stage_note("halt", e.term.str(), g.term.str()));
    if (opts.with_sam && !sam_steps.empty()) {
      try {
        std::size_t k = 0;  // EAM state index
        for (const SamStep& step : sam_steps) {
          if (step.stage.star) continue;
          if (k >= e.states.size()) {
            // On a blocked run the EAM detects the failure while leaving
            // its last state, so the final unanswerable query has no EAM
            // counterpart.
            bool final_blocked_query =
                g.term.kind == Termination::Kind::blocked &&
                step.stage == sam_steps.back().stage;
            if (!final_blocked_query)
              diverge(step.stage, "sam->eam", "missing EAM state");
            break;
          }
          SamQPtr q = std::get<SamQPtr>(step.state);
          SpecEamState spec = sam_to_eam(q, eam);
          const EamState& got = e.states[k];
          if (spec.code != got.code)
            diverge(step.stage, "sam->eam", "codes differ");
          else if (!spec_env_matches(spec.env, got.env))
            diverge(step.stage, "sam->eam", "environments differ");
          // the code is the ac-reconstruction of the erased state
          AcResult ac = trad_ac(erase(sam_erase(step.state)), eam);
          if (ac.code != got.code)
            diverge(step.stage, "ac", "ac code differs");
          ++k;
        }
        if (k != e.states.size())
          diverge(Stage::plain(1), "sam->eam", "extra EAM states");
      } catch (const AbtError& ex) {
        diverge(Stage::plain(1), "eam/translation", ex.what());
      }
    }
  }

  return rep;
}

// ---------------------------------------------------------------------
// Random strategies

namespace {

struct Rng {
  std::mt19937_64 gen;
  long uniform(long lo, long hi) {  // inclusive
    return std::uniform_int_distribution<long>(lo, hi)(gen);
  }
  double real() { return std::uniform_real_distribution<double>()(gen); }
};

StrategyPtr random_tree(Rng& rng, const RandomSpec& spec, int depth,
                        long height, const std::vector<Move>& frees) {
  Move player;
  Pointer ptr;
  if (rng.real() < spec.free_prob || height == 0) {
    player = frees[static_cast<std::size_t>(
        rng.uniform(0, static_cast<long>(frees.size()) - 1))];
    ptr = Pointer::free();
  } else {
    player = Move::numeral(rng.uniform(1, 3));
    ptr = Pointer::bound(rng.uniform(0, height - 1));
  }
  std::vector<Branch> kids;
  if (depth > 0) {
    long width = rng.uniform(0, spec.max_branch);
    for (long b = 1; b <= width; ++b)
      kids.push_back(Branch{Move::numeral(b), -1,
                            random_tree(rng, spec, depth - rng.uniform(1, 2),
                                        height + 1, frees)});
  }
  return make_node(player, ptr, std::move(kids));
}

}  // namespace

RandomCase random_case(std::uint64_t seed, const RandomSpec& spec) {
  Rng rng{std::mt19937_64(seed)};
  std::vector<Move> entry_names = {Move::named("e0"), Move::named("e1")};
  std::vector<Move> stuck_names = {Move::named("w0"), Move::named("w1")};

  // φ's free moves mostly hook the entries; the entries' free moves are
  // mostly fresh so case 2 is reachable. References between entries form
  // a DAG (e0 may call e1, never the converse), keeping the flattened
  // strategies of finite depth, which is what the finite-depth
  // termination result assumes.
  std::vector<Move> phi_frees = entry_names;
  phi_frees.push_back(stuck_names[0]);
  std::vector<Move> e0_frees = {entry_names[1], stuck_names[0],
                                stuck_names[1]};
  std::vector<Move> e1_frees = stuck_names;

  RandomCase out;
  out.phi = Rooted{random_tree(rng, spec, spec.max_depth, 1, phi_frees), -1};
  out.psi.entries[entry_names[0]] =
      Rooted{random_tree(rng, spec, spec.max_depth, 1, e0_frees), -1};
  out.psi.entries[entry_names[1]] =
      Rooted{random_tree(rng, spec, spec.max_depth, 1, e1_frees), -1};
  out.eam.main = decompile(out.phi, "x");
  char pfx[] = {'y', '\0'};
  for (auto& [name, r] : out.psi.entries) {
    out.eam.entries[name] = decompile(r, std::string(pfx) + name.str());
    pfx[0]++;
  }
  return out;
}

Campaign run_campaign(std::uint64_t seed, int count, const RandomSpec& spec,
                      const LockstepOptions& opts) {
  Campaign camp;
  for (int i = 0; i < count; ++i) {
    std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    RandomCase rc = random_case(s, spec);
    CaseReport rep = check_lockstep("random-" + std::to_string(i), rc.phi,
                                    rc.psi, rc.eam, opts);
    rep.seed = s;
    camp.cases.push_back(std::move(rep));
  }
  return camp;
}

}  // namespace abt
