#include "abt/frontends/classical.hpp"

#include <cctype>
#include <map>

namespace abt::mu {

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
      throw ParseError(std::string("expected '") + c + "' in classical Pcf");
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
  std::vector<std::pair<std::string, MTermPtr>>* env;

  MTermPtr mterm() {
    auto m = std::make_shared<MTerm>();
    if (lx.eat('\\'))
      while (lx.peek() != '.' && !lx_is_mu()) m->binders.push_back(lx.ident());
    lx.eat('.');
    if (!lx.eat_kw("mu")) throw ParseError(std::string("expected 'mu' in classical term") + lx.at());
    m->mu = lx.ident();
    lx.expect('.');
    m->body = cmd();
    return m;
  }

  bool lx_is_mu() {
    std::size_t save = lx.i;
    bool is = lx.eat_kw("mu");
    lx.i = save;
    return is;
  }

  CmdPtr cmd() {
    auto c = std::make_shared<Cmd>();
    if (lx.eat('[')) {
      c->k = Cmd::K::ret;
      c->cont = lx.ident();
      lx.expect(']');
      c->value = lx.number();
      return c;
    }
    if (!lx.eat_kw("case")) throw ParseError(std::string("expected a command") + lx.at());
    c->k = Cmd::K::kase;
    c->var = lx.ident();
    while (lx.peek() == '(') {
      lx.expect('(');
      c->args.push_back(mterm());
      lx.expect(')');
    }
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

  void bindings() {
    while (lx.peek() == '[') {
      lx.expect('[');
      while (true) {
        std::string name = lx.ident();
        if (!lx.eat2("<-")) throw ParseError(std::string("expected '<-' in binding") + lx.at());
        env->push_back({name, mterm()});
        bindings();
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
  // a program is a command, entries are terms
  p.cmd = pp.cmd();
  pp.bindings();
  if (!lx.done()) throw ParseError(std::string("trailing input after classical Pcf") + lx.at());
  return p;
}

// ---------------------------------------------------------------------
// Compilation

namespace {

struct Compiler {
  long next_tok = 0;
  std::string mint() { return "m" + std::to_string(next_tok++); }

  using Scope = std::map<std::string, std::pair<std::string, long>>;
  using ContScope = std::map<std::string, std::string>;

  CNodePtr cmd(const CmdPtr& c, Scope sc, ContScope rho) {
    if (c->k == Cmd::K::ret) {
      auto it = rho.find(c->cont);
      if (it != rho.end())
        return make_cnode(Move::cbv(true, c->value), it->second, {});
      return make_cnode(Move::cbv(true, c->value, c->cont), "", {});
    }
    Move head;
    std::string hbind;
    auto it = sc.find(c->var);
    if (it != sc.end()) {
      // a bound variable asks for the argument that binds it, so its
      // move carries the full ?i branch name
      head = Move::cbv(false, it->second.second);
      hbind = it->second.first;
    } else {
      head = Move::named(c->var);
    }
    std::vector<CBranch> kids;
    for (std::size_t j = 0; j < c->args.size(); ++j) {
      const MTermPtr& m = c->args[j];
      std::string tok = mint();
      Scope inner = sc;
      for (std::size_t b = 0; b < m->binders.size(); ++b)
        inner[m->binders[b]] = {tok, static_cast<long>(b + 1)};
      ContScope rho2 = rho;
      rho2[m->mu] = tok;
      kids.push_back(
          CBranch{Move::cbv(false, static_cast<long>(j + 1)), tok, -1,
                  cmd(m->body, inner, rho2)});
    }
    for (const auto& [n, arm] : c->arms) {
      std::string tok = mint();
      kids.push_back(CBranch{Move::cbv(true, n), tok, -1, cmd(arm, sc, rho)});
    }
    return make_cnode(head, hbind, std::move(kids));
  }

  CTree term(const MTermPtr& m) {
    std::string tok = mint();
    Scope sc;
    for (std::size_t b = 0; b < m->binders.size(); ++b)
      sc[m->binders[b]] = {tok, static_cast<long>(b + 1)};
    ContScope rho;
    rho[m->mu] = tok;
    return CTree{tok, -1, cmd(m->body, sc, rho)};
  }

  CTree command(const CmdPtr& c) {
    std::string tok = mint();
    return CTree{tok, -1, cmd(c, {}, {})};
  }
};

}  // namespace

CTree compile(const MTermPtr& m) {
  Compiler c;
  return c.term(m);
}

CTree compile_cmd(const CmdPtr& c) {
  Compiler comp;
  return comp.command(c);
}

Compiled compile_program(const Parsed& p) {
  Compiled out;
  CTree main = compile_cmd(p.cmd);
  out.phi = compile_concrete(main);
  out.eam.main = main;
  for (const auto& [name, m] : p.env) {
    CTree entry = compile(m);
    Move key = Move::named(name);
    out.psi.entries[key] = compile_concrete(entry);
    out.eam.entries[key] = entry;
  }
  return out;
}

// ---------------------------------------------------------------------
// The reference machine

namespace {

struct Env;
using EnvPtr = std::shared_ptr<const Env>;

struct TermClo {
  MTermPtr term;
  EnvPtr env;
};
struct ContClo {
  std::vector<std::pair<long, CmdPtr>> arms;
  EnvPtr env;
};

struct Env {
  std::map<std::string, TermClo> vars;
  std::map<std::string, ContClo> conts;
  EnvPtr parent;

  const TermClo* var(const std::string& x) const {
    for (const Env* e = this; e; e = e->parent.get()) {
      auto it = e->vars.find(x);
      if (it != e->vars.end()) return &it->second;
    }
    return nullptr;
  }
  const ContClo* cont(const std::string& a) const {
    for (const Env* e = this; e; e = e->parent.get()) {
      auto it = e->conts.find(a);
      if (it != e->conts.end()) return &it->second;
    }
    return nullptr;
  }
};

}  // namespace

MachineResult run(const CmdPtr& c,
                  const std::vector<std::pair<std::string, MTermPtr>>& env,
                  long fuel) {
  auto base = std::make_shared<Env>();
  for (const auto& [name, m] : env)
    base->vars.emplace(name, TermClo{m, nullptr});

  CmdPtr cur = c;
  EnvPtr rho = base;
  MachineResult res;
  for (long steps = 0; steps < fuel; ++steps) {
    if (cur->k == Cmd::K::ret) {
      const ContClo* k = rho->cont(cur->cont);
      if (!k) {
        res.k = MachineResult::K::observable;
        res.name = cur->cont;
        res.value = cur->value;
        res.steps = steps;
        res.final = cur;
        return res;
      }
      const CmdPtr* arm = nullptr;
      for (const auto& [n, body] : k->arms)
        if (n == cur->value) arm = &body;
      if (!arm) throw StuckState("no continuation arm for the value");
      cur = *arm;
      rho = k->env ? k->env : base;
      continue;
    }
    const TermClo* f = rho->var(cur->var);
    if (!f) {
      res.k = MachineResult::K::observable;
      res.name = cur->var;
      res.steps = steps;
      res.final = cur;
      return res;
    }
    const MTermPtr& m = f->term;
    if (m->binders.size() != cur->args.size())
      throw StuckState("arity mismatch in classical Pcf call");
    auto next = std::make_shared<Env>();
    next->parent = f->env ? f->env : base;
    for (std::size_t j = 0; j < cur->args.size(); ++j)
      next->vars.emplace(m->binders[j], TermClo{cur->args[j], rho});
    next->conts.emplace(m->mu, ContClo{cur->arms, rho});
    cur = m->body;
    rho = next;
  }
  res.k = MachineResult::K::fuel;
  res.final = cur;
  return res;
}

}  // namespace abt::mu
