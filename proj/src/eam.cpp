#include "abt/machines/eam.hpp"

namespace abt {

const CTree* EamProgram::entry(const Move& name) const {
  auto it = entries.find(name);
  if (it != entries.end()) return &it->second;
  if (!gen) return nullptr;
  auto [cit, inserted] = cache_->memo.try_emplace(name);
  if (inserted) cit->second = gen(name);
  return cit->second ? &*cit->second : nullptr;
}

namespace {

// Whether the closure's binder occurs in its body; a generator may
// produce occurrences, so it counts as used.
bool binder_used(const CNode* n, const std::string& b) {
  if (n->hbind == b) return true;
  if (n->has_gen()) return true;
  for (const CBranch& k : n->kids())
    if (binder_used(k.sub.get(), b)) return true;
  return false;
}

struct Machine {
  const EamProgram& prog;
  EamRun& run;

  EamFrame* fresh() {
    run.frames.emplace_back();
    return &run.frames.back();
  }

  // Enter a closure (λbinder.body)[env] whose call site provides the
  // branches of `call` evaluated in `call_env`; binderless closures with
  // no branches to bind enter without a frame.
  EamState enter(const CNode* body, const std::string& binder,
                 const EamFrame* closure_env, const CNode* call,
                 const EamFrame* call_env) {
    if (call->kids().empty() && !call->has_gen() &&
        !binder_used(body, binder))
      return EamState{body, closure_env};
    EamFrame* f = fresh();
    f->binder = binder;
    f->call = call;
    f->call_env = call_env;
    f->parent = closure_env;
    return EamState{body, f};
  }
};

}  // namespace

EamRun eam_run(const EamProgram& prog, const EamOptions& opts) {
  EamRun run;
  Machine m{prog, run};

  EamFrame* top = m.fresh();
  top->binder = prog.main.root_binder;
  top->top = true;
  run.top = top;

  run.states.push_back(EamState{prog.main.root.get(), top});
  while (true) {
    if (static_cast<long>(run.states.size()) > opts.fuel) {
      run.term = Termination::fuel(
          Stage::plain(static_cast<long>(run.states.size())));
      return run;
    }
    const EamState cur = run.states.back();
    const long k = static_cast<long>(run.states.size());
    const CNode* code = cur.code;

    if (opts.star && code->head.is_star() && code->hbind.empty()) {
      const CBranch* br = code->child(Move::star());
      if (!br) throw MalformedState("star move without a star branch");
      run.states.push_back(
          m.enter(br->sub.get(), br->binder, cur.env, code, cur.env));
      continue;
    }

    if (code->hbind.empty()) {
      const CTree* e = prog.entry(code->head);
      if (!e) {
        run.term =
            Termination::free_answer(code->head, Stage::starred(k + 1));
        return run;
      }
      run.states.push_back(
          m.enter(e->root.get(), e->root_binder, top, code, cur.env));
      continue;
    }

    const EamFrame* f = cur.env;
    for (; f; f = f->parent)
      if (f->binder == code->hbind) break;
    if (!f) throw MalformedState("unbound binder token " + code->hbind);
    if (f->top) {
      // The head answers the initial query.
      run.term = Termination::answer(code->head, Stage::starred(k + 1));
      return run;
    }
    const CBranch* br = f->call->child(code->head);
    if (!br) {
      // The call site has no such branch: the query is improper.
      run.term = Termination::blocked({}, Stage::starred(k + 1));
      return run;
    }
    run.states.push_back(
        m.enter(br->sub.get(), br->binder, f->call_env, code, cur.env));
  }
}

}  // namespace abt
