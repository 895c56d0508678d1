#include "abt/frontends/cbv.hpp"

#include <cctype>
#include <variant>

namespace abt::cbv {

TypePtr nat() {
  static TypePtr t = std::make_shared<Type>();
  return t;
}

TypePtr arrow(TypePtr a, TypePtr b) {
  auto t = std::make_shared<Type>();
  t->base = false;
  t->from = std::move(a);
  t->to = std::move(b);
  return t;
}

bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (!a || !b || a->base != b->base) return false;
  if (a->base) return true;
  return type_equal(a->from, b->from) && type_equal(a->to, b->to);
}

std::string type_str(const TypePtr& t) {
  if (!t) return "?";
  if (t->base) return "nat";
  return "(" + type_str(t->from) + "->" + type_str(t->to) + ")";
}

// ---------------------------------------------------------------------
// Parser

namespace {

struct Lexer {
  std::string src;
  std::size_t i = 0;
  std::string at() const {
    long line = 1, col = 1;
    for (std::size_t j = 0; j < i && j < src.size(); ++j) {
      if (src[j] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return " at line " + std::to_string(line) + ":" + std::to_string(col);
  }
  void skip() {
    while (i < src.size()) {
      if (std::isspace(static_cast<unsigned char>(src[i]))) {
        ++i;
      } else if (src[i] == ';') {
        while (i < src.size() && src[i] != '\n') ++i;
      } else {
        break;
      }
    }
  }
  bool done() {
    skip();
    return i >= src.size();
  }
  char peek() {
    skip();
    return i < src.size() ? src[i] : '\0';
  }
  bool eat(char c) {
    skip();
    if (i < src.size() && src[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c))
      throw ParseError(std::string("expected '") + c + "' in CBV input");
  }
  bool eat2(const char* s) {
    skip();
    if (i + 1 < src.size() && src[i] == s[0] && src[i + 1] == s[1]) {
      i += 2;
      return true;
    }
    return false;
  }
  bool eat_kw(const std::string& kw) {
    skip();
    if (src.compare(i, kw.size(), kw) == 0) {
      std::size_t j = i + kw.size();
      if (j >= src.size() ||
          (!std::isalnum(static_cast<unsigned char>(src[j])) &&
           src[j] != '_')) {
        i = j;
        return true;
      }
    }
    return false;
  }
  std::string ident() {
    skip();
    std::size_t start = i;
    while (i < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[i])) ||
            src[i] == '_' || src[i] == '\''))
      ++i;
    if (start == i) throw ParseError(std::string("expected an identifier") + at());
    return src.substr(start, i - start);
  }
  long number() {
    skip();
    std::size_t start = i;
    while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i])))
      ++i;
    if (start == i) throw ParseError(std::string("expected a numeral") + at());
    return std::stol(src.substr(start, i - start));
  }
};

struct Parser {
  Lexer& lx;
  std::vector<std::pair<std::string, ValPtr>>* env;

  TypePtr type() {
    TypePtr t;
    if (lx.eat('(')) {
      t = type();
      lx.expect(')');
    } else if (lx.eat_kw("nat") || lx.eat_kw("iota")) {
      t = nat();
    } else {
      throw ParseError(std::string("expected a type") + lx.at());
    }
    if (lx.eat2("->")) return arrow(t, type());
    return t;
  }

  ValPtr value() {
    auto v = std::make_shared<Val>();
    if (lx.eat('\\')) {
      v->k = Val::K::abs;
      lx.expect('(');
      v->z = lx.ident();
      lx.expect(':');
      v->zty = type();
      lx.expect(',');
      v->beta = lx.ident();
      lx.expect(')');
      lx.expect('.');
      v->body = cmd();
      return v;
    }
    if (lx.eat('(')) {
      ValPtr l = value();
      if (lx.eat('+')) {
        ValPtr r = value();
        lx.expect(')');
        v->k = Val::K::add;
        v->lhs = std::move(l);
        v->rhs = std::move(r);
        return v;
      }
      lx.expect(')');
      return l;
    }
    if (std::isdigit(static_cast<unsigned char>(lx.peek()))) {
      v->k = Val::K::num;
      v->n = lx.number();
      return v;
    }
    v->k = Val::K::var;
    v->x = lx.ident();
    return v;
  }

  CmdPtr cmd() {
    auto c = std::make_shared<Cmd>();
    if (lx.eat_kw("let")) {
      c->k = Cmd::K::let;
      c->x = lx.ident();
      lx.expect(':');
      c->xty = type();
      lx.expect('=');
      c->y = lx.ident();
      c->v = value();
      if (!lx.eat_kw("in")) throw ParseError(std::string("expected 'in' after let") + lx.at());
      c->rest = cmd();
      return c;
    }
    if (lx.eat_kw("case")) {
      c->k = Cmd::K::kase;
      c->scrut = lx.ident();
      lx.expect('[');
      if (!lx.eat(']')) {
        while (true) {
          long n = lx.number();
          if (!lx.eat2("->")) throw ParseError(std::string("expected '->' in case arm") + lx.at());
          c->arms.push_back({n, cmd()});
          if (lx.eat(']')) break;
          lx.expect(',');
        }
      }
      return c;
    }
    lx.expect('[');
    c->k = Cmd::K::ret;
    c->alpha = lx.ident();
    lx.expect(']');
    c->v = value();
    return c;
  }

  void bindings() {
    while (lx.peek() == '[') {
      lx.expect('[');
      while (true) {
        std::string name = lx.ident();
        if (!lx.eat2("<-")) throw ParseError(std::string("expected '<-' in binding") + lx.at());
        env->push_back({name, value()});
        if (lx.eat(']')) break;
        lx.expect(',');
      }
    }
  }
};

}  // namespace

Parsed parse(const std::string& text) {
  Lexer lx{text};
  Parsed p;
  Parser pp{lx, &p.env};
  p.cmd = pp.cmd();
  pp.bindings();
  if (!lx.done()) throw ParseError(std::string("trailing input after CBV program") + lx.at());
  return p;
}

// ---------------------------------------------------------------------
// Typing

static TypePtr check_body(const CmdPtr& c,
                          std::map<std::string, TypePtr> gamma,
                          std::map<std::string, TypePtr> delta,
                          const std::string& target);

TypePtr typecheck_val(const ValPtr& v, std::map<std::string, TypePtr> gamma,
                      std::map<std::string, TypePtr> delta) {
  switch (v->k) {
    case Val::K::num:
      return nat();  // Γ;Δ ⊢ n : ι
    case Val::K::var: {
      auto it = gamma.find(v->x);
      if (it == gamma.end())
        throw TypeError("variable rule: " + v->x + " is not declared");
      if (!it->second->base)
        throw TypeError("variable rule: " + v->x + " must have basic type");
      return nat();
    }
    case Val::K::add: {
      if (!typecheck_val(v->lhs, gamma, delta)->base ||
          !typecheck_val(v->rhs, gamma, delta)->base)
        throw TypeError("addition needs basic operands");
      return nat();
    }
    case Val::K::abs: {
      if (!v->zty) throw TypeError("abstraction rule: missing annotation");
      // the result type is not annotated; infer it from the body's uses
      // of β by checking the body with β at a type variable is avoided:
      // the rule is checked with β:τ for the τ the body delivers, found
      // by scanning [β]V occurrences. We keep it simple: β gets a fresh
      // slot solved on first use.
      auto g = gamma;
      g[v->z] = v->zty;
      auto d = delta;
      d[v->beta] = nullptr;  // unsolved
      TypePtr solved = check_body(v->body, g, d, v->beta);
      if (!solved)
        throw TypeError("abstraction rule: result type of " + v->beta +
                        " is never determined");
      return arrow(v->zty, solved);
    }
  }
  throw TypeError("unreachable value form");
}

namespace {
TypePtr unify(const TypePtr& a, const TypePtr& b, const char* rule) {
  if (!a) return b;
  if (!b) return a;
  if (!type_equal(a, b))
    throw TypeError(std::string(rule) + ": type mismatch " + type_str(a) +
                    " vs " + type_str(b));
  return a;
}

struct BodyChecker {
  std::string target;
  TypePtr solved;

  void cmd(const CmdPtr& c, std::map<std::string, TypePtr> gamma,
           std::map<std::string, TypePtr> delta) {
    switch (c->k) {
      case Cmd::K::ret: {
        auto it = delta.find(c->alpha);
        if (it == delta.end())
          throw TypeError("[α]V rule: continuation " + c->alpha +
                          " is not declared");
        TypePtr vt = typecheck_val(c->v, gamma, delta);
        if (c->alpha == target) {
          solved = unify(solved, vt, "[α]V rule");
        } else if (it->second) {
          unify(it->second, vt, "[α]V rule");
        }
        return;
      }
      case Cmd::K::kase: {
        auto it = gamma.find(c->scrut);
        if (it == gamma.end() || !it->second->base)
          throw TypeError("case rule: scrutinee must be a declared basic "
                          "variable");
        for (const auto& [n, arm] : c->arms) cmd(arm, gamma, delta);
        return;
      }
      case Cmd::K::let: {
        auto it = gamma.find(c->y);
        if (it == gamma.end())
          throw TypeError("let rule: " + c->y + " is not declared");
        if (it->second->base)
          throw TypeError("let rule: " + c->y + " must have an arrow type");
        TypePtr vt = typecheck_val(c->v, gamma, delta);
        unify(it->second->from, vt, "let rule (argument)");
        if (!c->xty) throw TypeError("let rule: missing annotation");
        unify(it->second->to, c->xty, "let rule (result)");
        auto g = gamma;
        g[c->x] = c->xty;
        cmd(c->rest, g, delta);
        return;
      }
    }
  }
};
}  // namespace

static TypePtr check_body(const CmdPtr& c,
                          std::map<std::string, TypePtr> gamma,
                          std::map<std::string, TypePtr> delta,
                          const std::string& target) {
  BodyChecker bc{target, nullptr};
  bc.cmd(c, std::move(gamma), std::move(delta));
  return bc.solved;
}

void typecheck_cmd(const CmdPtr& c, std::map<std::string, TypePtr> gamma,
                   std::map<std::string, TypePtr> delta) {
  BodyChecker bc{"", nullptr};
  bc.cmd(c, std::move(gamma), std::move(delta));
}

void typecheck_program(const Parsed& p) {
  std::map<std::string, TypePtr> gamma;
  std::map<std::string, TypePtr> delta;
  for (const auto& [name, v] : p.env)
    gamma[name] = typecheck_val(v, {}, {});
  // free continuations of the main command get unsolved slots
  std::function<void(const CmdPtr&)> scan = [&](const CmdPtr& c) {
    if (c->k == Cmd::K::ret) {
      if (!delta.count(c->alpha)) delta[c->alpha] = nullptr;
    } else if (c->k == Cmd::K::kase) {
      for (auto& [n, a] : c->arms) scan(a);
    } else {
      scan(c->rest);
    }
  };
  scan(p.cmd);
  typecheck_cmd(p.cmd, std::move(gamma), std::move(delta));
}

// ---------------------------------------------------------------------
// Compilation

namespace {

// Compile-time environment: basic variables carry numerals, function
// variables and continuations carry binder tokens.
struct CEnv {
  std::map<std::string, long> nums;
  std::map<std::string, std::string> toks;
};

// A compiled value: its root move payload (• for abstractions, the
// numeral for basic values) plus the branch family of the root.
struct CompVal {
  std::optional<long> payload;  // nullopt = •
  std::vector<CBranch> kids;
  CBranchGen gen;
};

struct Compiler {
  long next_tok = 0;
  std::string mint() { return "v" + std::to_string(next_tok++); }

  long resolve_num(const ValPtr& v, const CEnv& rho) {
    switch (v->k) {
      case Val::K::num:
        return v->n;
      case Val::K::var: {
        auto it = rho.nums.find(v->x);
        if (it == rho.nums.end())
          throw ScopeError("unbound basic variable " + v->x);
        return it->second;
      }
      case Val::K::add:
        return resolve_num(v->lhs, rho) + resolve_num(v->rhs, rho);
      default:
        throw TypeError("a function value where a numeral is needed");
    }
  }

  CompVal value(const ValPtr& v, const CEnv& rho) {
    if (v->k != Val::K::abs) return CompVal{resolve_num(v, rho), {}, {}};
    if (!v->zty)
      throw TypeError("missing type annotation on λ(z,β) binder");
    CompVal out;
    out.payload = std::nullopt;
    if (v->zty->base) {
      // branches (?n, (λx.⟦c⟧ρ[z<-n, β<-x])) for every numeral n
      ValPtr val = v;
      CEnv base = rho;
      Compiler* self = this;
      out.gen = [self, val, base](const Move& key) -> std::optional<CBranch> {
        const auto* cm = std::get_if<Move::Cbv>(&key.rep);
        if (!cm || cm->answer || !cm->payload || !cm->var.empty())
          return std::nullopt;
        std::string tok = self->mint();
        CEnv inner = base;
        inner.nums[val->z] = *cm->payload;
        inner.toks[val->beta] = tok;
        CNodePtr body = self->cmd(val->body, inner);
        if (!body) return std::nullopt;
        return CBranch{key, tok, 1, body};
      };
    } else {
      std::string tok = mint();
      CEnv inner = rho;
      inner.toks[v->z] = tok;
      inner.toks[v->beta] = tok;
      CNodePtr body = cmd(v->body, inner);
      if (body)
        out.kids.push_back(
            CBranch{Move::cbv(false, std::nullopt), tok, 1, body});
    }
    return out;
  }

  // nullptr encodes an undefined compilation (a case with no matching
  // arm); generator branches propagate it as an absent branch.
  CNodePtr cmd(const CmdPtr& c, const CEnv& rho) {
    switch (c->k) {
      case Cmd::K::kase: {
        auto it = rho.nums.find(c->scrut);
        if (it == rho.nums.end())
          throw ScopeError("case scrutinee " + c->scrut +
                           " has no precomputed value");
        for (const auto& [n, arm] : c->arms)
          if (n == it->second) return cmd(arm, rho);
        return nullptr;
      }
      case Cmd::K::ret: {
        CompVal cv = value(c->v, rho);
        Move head;
        std::string hbind;
        auto it = rho.toks.find(c->alpha);
        if (it != rho.toks.end()) {
          head = Move::cbv(true, cv.payload);
          hbind = it->second;
        } else {
          head = Move::cbv(true, cv.payload, c->alpha);
        }
        return make_cnode(head, hbind, std::move(cv.kids),
                          std::move(cv.gen));
      }
      case Cmd::K::let: {
        if (!c->xty)
          throw TypeError("missing type annotation on let-bound " + c->x);
        CompVal cv = value(c->v, rho);
        Move head;
        std::string hbind;
        auto it = rho.toks.find(c->y);
        if (it != rho.toks.end()) {
          head = Move::cbv(false, cv.payload);
          hbind = it->second;
        } else {
          head = Move::cbv(false, cv.payload, c->y);
        }
        std::vector<CBranch> kids = std::move(cv.kids);
        CBranchGen gen = std::move(cv.gen);
        if (c->xty->base) {
          // value branches (!n, (⟦c⟧ρ[x<-n])) for every numeral n
          CmdPtr rest = c->rest;
          std::string xn = c->x;
          CEnv base = rho;
          Compiler* self = this;
          CBranchGen vals =
              [self, rest, xn, base](const Move& key)
              -> std::optional<CBranch> {
            const auto* cm = std::get_if<Move::Cbv>(&key.rep);
            if (!cm || !cm->answer || !cm->payload || !cm->var.empty())
              return std::nullopt;
            CEnv inner = base;
            inner.nums[xn] = *cm->payload;
            CNodePtr body = self->cmd(rest, inner);
            if (!body) return std::nullopt;
            return CBranch{key, self->mint(), 0, body};
          };
          if (gen) {
            CBranchGen args = std::move(gen);
            gen = [args, vals](const Move& key) -> std::optional<CBranch> {
              if (auto b = args(key)) return b;
              return vals(key);
            };
          } else {
            gen = vals;
          }
        } else {
          std::string tok = mint();
          CEnv inner = rho;
          inner.toks[c->x] = tok;
          CNodePtr body = cmd(c->rest, inner);
          if (body)
            kids.push_back(
                CBranch{Move::cbv(true, std::nullopt), tok, 1, body});
        }
        return make_cnode(head, hbind, std::move(kids), std::move(gen));
      }
    }
    return nullptr;
  }
};

}  // namespace

Compiled compile_program(const Parsed& p) {
  Compiled out;
  auto compiler = std::make_shared<Compiler>();

  // closing clause: basic entries go into ρ, function entries become
  // counter-strategy trees keyed (?payload, name)
  CEnv rho;
  std::vector<std::pair<std::string, CompVal>> funs;
  for (const auto& [name, v] : p.env) {
    if (v->k == Val::K::abs) {
      funs.push_back({name, compiler->value(v, CEnv{})});
    } else {
      rho.nums[name] = compiler->resolve_num(v, CEnv{});
    }
  }

  CNodePtr main = compiler->cmd(p.cmd, rho);
  if (!main) throw StuckState("the main command compiles to no tree");
  std::string root_tok = "vroot";
  CTree main_tree{root_tok, 0, main};
  out.phi = compile_concrete(main_tree);
  out.eam.main = main_tree;

  auto funs_shared =
      std::make_shared<std::vector<std::pair<std::string, CompVal>>>(
          std::move(funs));
  for (const auto& [name, cv] : *funs_shared) {
    // materialize the statically known branches as entries
    for (const CBranch& b : cv.kids) {
      const auto& cm = std::get<Move::Cbv>(b.key.rep);
      Move key = Move::cbv(cm.answer, cm.payload, name);
      CTree entry{b.binder, b.binders, b.sub};
      out.psi.entries[key] = compile_concrete(entry);
      out.eam.entries[key] = entry;
    }
  }
  // generator-backed entries: (?n, name) on demand
  auto lazy_tree =
      [funs_shared, compiler](const Move& key) -> std::optional<CTree> {
    const auto* cm = std::get_if<Move::Cbv>(&key.rep);
    if (!cm || cm->var.empty()) return std::nullopt;
    for (const auto& [name, cv] : *funs_shared) {
      if (name != cm->var || !cv.gen) continue;
      Move inner = Move::cbv(cm->answer, cm->payload);
      auto b = cv.gen(inner);
      if (!b) return std::nullopt;
      return CTree{b->binder, b->binders, b->sub};
    }
    return std::nullopt;
  };
  out.psi.gen = [lazy_tree](const Move& key) -> std::optional<Rooted> {
    auto t = lazy_tree(key);
    if (!t) return std::nullopt;
    return compile_concrete(*t);
  };
  out.eam.gen = lazy_tree;
  return out;
}

// ---------------------------------------------------------------------
// The reference machine

namespace {

struct REnv;
using REnvPtr = std::shared_ptr<const REnv>;

struct ValClo {
  ValPtr v;
  REnvPtr env;
};
struct MuClo {
  std::string x;
  CmdPtr body;
  REnvPtr env;
};

struct REnv {
  std::map<std::string, ValClo> vals;
  std::map<std::string, MuClo> mus;
  REnvPtr parent;
  const ValClo* val(const std::string& x) const {
    for (const REnv* e = this; e; e = e->parent.get()) {
      auto it = e->vals.find(x);
      if (it != e->vals.end()) return &it->second;
    }
    return nullptr;
  }
  const MuClo* mu(const std::string& a) const {
    for (const REnv* e = this; e; e = e->parent.get()) {
      auto it = e->mus.find(a);
      if (it != e->mus.end()) return &it->second;
    }
    return nullptr;
  }
};

std::optional<long> resolve(const ValClo& c);

std::optional<long> resolve_val(const ValPtr& v, const REnvPtr& env) {
  switch (v->k) {
    case Val::K::num:
      return v->n;
    case Val::K::var: {
      const ValClo* c = env ? env->val(v->x) : nullptr;
      if (!c) return std::nullopt;
      return resolve(*c);
    }
    case Val::K::add: {
      auto l = resolve_val(v->lhs, env);
      auto r = resolve_val(v->rhs, env);
      if (l && r) return *l + *r;
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

std::optional<long> resolve(const ValClo& c) {
  return resolve_val(c.v, c.env);
}

}  // namespace

MachineResult run(const CmdPtr& c,
                  const std::vector<std::pair<std::string, ValPtr>>& env,
                  long fuel) {
  auto base = std::make_shared<REnv>();
  for (const auto& [name, v] : env)
    base->vals.emplace(name, ValClo{v, nullptr});

  CmdPtr cur = c;
  REnvPtr rho = base;
  MachineResult res;
  for (long steps = 0; steps < fuel; ++steps) {
    switch (cur->k) {
      case Cmd::K::let: {
        const ValClo* f = rho->val(cur->y);
        if (!f || f->v->k != Val::K::abs)
          throw StuckState("let head " + cur->y +
                           " is not bound to an abstraction");
        auto next = std::make_shared<REnv>();
        next->parent = f->env ? f->env : base;
        next->vals.emplace(f->v->z, ValClo{cur->v, rho});
        next->mus.emplace(f->v->beta, MuClo{cur->x, cur->rest, rho});
        cur = f->v->body;
        rho = next;
        break;
      }
      case Cmd::K::kase: {
        const ValClo* x = rho->val(cur->scrut);
        if (!x) throw StuckState("case scrutinee unbound");
        auto n = resolve(*x);
        if (!n) throw StuckState("case scrutinee is not a numeral");
        const CmdPtr* arm = nullptr;
        for (const auto& [k, body] : cur->arms)
          if (k == *n) arm = &body;
        if (!arm) throw StuckState("no case arm for the scrutinee value");
        cur = *arm;
        break;
      }
      case Cmd::K::ret: {
        const MuClo* k = rho->mu(cur->alpha);
        if (!k) {
          res.k = MachineResult::K::observable;
          res.cont = cur->alpha;
          res.value = resolve_val(cur->v, rho);
          res.steps = steps;
          return res;
        }
        auto next = std::make_shared<REnv>();
        next->parent = k->env ? k->env : base;
        next->vals.emplace(k->x, ValClo{cur->v, rho});
        cur = k->body;
        rho = next;
        break;
      }
    }
  }
  res.k = MachineResult::K::fuel;
  return res;
}

}  // namespace abt::cbv
