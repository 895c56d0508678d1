#include "abt/frontends/ludics.hpp"

#include <cctype>

namespace abt::lud {

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
      throw ParseError(std::string("expected '") + c + "' in a design");
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
  std::vector<std::pair<std::string, DesignPtr>>* env;

  IndexSet iset() {
    lx.expect('{');
    std::vector<long> xs;
    if (!lx.eat('}')) {
      while (true) {
        xs.push_back(lx.number());
        if (lx.eat('}')) break;
        lx.expect(',');
      }
    }
    return make_index_set(std::move(xs));
  }

  DesignPtr design() {
    auto d = std::make_shared<Design>();
    lx.expect('{');
    if (lx.eat('}')) return d;
    while (true) {
      IndexSet J = iset();
      lx.expect('=');
      lx.expect('\\');
      Field f;
      lx.expect('{');
      if (!lx.eat('}')) {
        while (true) {
          f.binders.push_back(lx.ident());
          if (lx.eat('}')) break;
          lx.eat(',');
        }
      }
      lx.expect('.');
      f.cmd = cmd();
      if (f.binders.size() != J.size())
        throw ParseError(std::string("binder count must match the index set") + lx.at());
      if (!d->fields.emplace(J, std::move(f)).second)
        throw ParseError(std::string("duplicate record field") + lx.at());
      if (lx.eat('}')) break;
      lx.expect(',');
    }
    return d;
  }

  LCmdPtr cmd() {
    auto c = std::make_shared<LCmd>();
    if (lx.eat_kw("daimon") || lx.eat2("✠")) {
      c->k = LCmd::K::daimon;
      return c;
    }
    if (lx.eat_kw("omega")) {
      c->k = LCmd::K::omega;
      return c;
    }
    lx.expect('(');
    c->k = LCmd::K::apply;
    c->head = lx.ident();
    lx.expect('.');
    c->iset = iset();
    lx.expect(')');
    lx.expect('{');
    if (!lx.eat('}')) {
      while (true) {
        c->actuals.push_back(design());
        if (lx.eat('}')) break;
        lx.expect(',');
      }
    }
    if (c->actuals.size() != c->iset.size())
      throw ParseError(std::string("actual count must match the index set") + lx.at());
    return c;
  }

  void bindings() {
    while (lx.peek() == '[') {
      lx.expect('[');
      while (true) {
        std::string name = lx.ident();
        if (!lx.eat2("<-")) throw ParseError(std::string("expected '<-' in binding") + lx.at());
        env->push_back({name, design()});
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
  if (!lx.done()) throw ParseError(std::string("trailing input after a ludics cut") + lx.at());
  return p;
}

// ---------------------------------------------------------------------
// Compilation

namespace {

struct Compiler {
  long next_tok = 0;
  std::string mint() { return "l" + std::to_string(next_tok++); }

  // scope: bound variable -> (block token, index j)
  using Scope = std::map<std::string, std::pair<std::string, long>>;

  CNodePtr omega_node() { return make_cnode(Move::omega(), "", {}); }
  CNodePtr daimon_node() { return make_cnode(Move::daimon(), "", {}); }

  CNodePtr cmd(const LCmdPtr& c, const Scope& sc) {
    if (c->k == LCmd::K::omega) return omega_node();
    if (c->k == LCmd::K::daimon) return daimon_node();
    Move head;
    std::string hbind;
    auto it = sc.find(c->head);
    if (it != sc.end()) {
      head = Move::ludics_pair(it->second.second, c->iset);
      hbind = it->second.first;
    } else {
      head = Move::ludics_call(c->head, c->iset);
    }
    // branches ((i,J), λ{x_j}.P_{i,J}) for i∈I and every finite J;
    // explicit fields now, Ω defaults on demand.
    std::vector<CBranch> kids;
    for (std::size_t pos = 0; pos < c->iset.size(); ++pos) {
      long i = c->iset[pos];
      const DesignPtr& actual = c->actuals[pos];
      for (const auto& [J, field] : actual->fields)
        kids.push_back(branch(i, J, field, sc));
    }
    auto self = this;
    Scope base = sc;
    IndexSet iset = c->iset;
    CBranchGen gen = [self, base, iset](const Move& key)
        -> std::optional<CBranch> {
      const auto* pm = std::get_if<Move::LudicsPair>(&key.rep);
      if (!pm) return std::nullopt;
      bool in_i = false;
      for (long i : iset) in_i = in_i || i == pm->index;
      if (!in_i) return std::nullopt;
      // a field the design does not mention: implicit Ω
      std::string tok = self->mint();
      return CBranch{key, tok, static_cast<int>(pm->args.size()),
                     self->omega_node()};
    };
    return make_cnode(head, hbind, std::move(kids), std::move(gen));
  }

  CBranch branch(long i, const IndexSet& J, const Field& field,
                 Scope sc) {
    std::string tok = mint();
    for (std::size_t j = 0; j < J.size(); ++j)
      sc[field.binders[j]] = {tok, J[j]};
    return CBranch{Move::ludics_pair(i, J), tok, static_cast<int>(J.size()),
                   cmd(field.cmd, sc)};
  }

  // entry for a counter-design: one tree per head move (x·I)
  std::optional<CTree> entry(const DesignPtr& d, const IndexSet& I) {
    std::string tok = mint();
    auto it = d->fields.find(I);
    if (it == d->fields.end()) return CTree{tok, -1, omega_node()};
    Scope sc;
    for (std::size_t j = 0; j < I.size(); ++j)
      sc[it->second.binders[j]] = {tok, I[j]};
    return CTree{tok, static_cast<int>(I.size()), cmd(it->second.cmd, sc)};
  }
};

}  // namespace

Compiled compile_program(const Parsed& p) {
  Compiled out;
  auto compiler = std::make_shared<Compiler>();
  CTree main{"lroot", 0, compiler->cmd(p.cmd, {})};
  out.phi = compile_concrete(main);
  out.eam.main = main;

  auto entries = std::make_shared<
      std::vector<std::pair<std::string, DesignPtr>>>(p.env);
  auto lazy_tree =
      [entries, compiler](const Move& key) -> std::optional<CTree> {
    const auto* cm = std::get_if<Move::LudicsCall>(&key.rep);
    if (!cm) return std::nullopt;
    for (const auto& [name, d] : *entries)
      if (name == cm->var) return compiler->entry(d, cm->args);
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

struct LEnv;
using LEnvPtr = std::shared_ptr<const LEnv>;
struct DClo {
  DesignPtr d;
  LEnvPtr env;
};
struct LEnv {
  std::map<std::string, DClo> vars;
  LEnvPtr parent;
  const DClo* get(const std::string& x) const {
    for (const LEnv* e = this; e; e = e->parent.get()) {
      auto it = e->vars.find(x);
      if (it != e->vars.end()) return &it->second;
    }
    return nullptr;
  }
};

}  // namespace

MachineResult run(const LCmdPtr& c,
                  const std::vector<std::pair<std::string, DesignPtr>>& env,
                  long fuel) {
  auto base = std::make_shared<LEnv>();
  for (const auto& [name, d] : env)
    base->vars.emplace(name, DClo{d, nullptr});

  LCmdPtr cur = c;
  LEnvPtr rho = base;
  MachineResult res;
  for (long steps = 0; steps < fuel; ++steps) {
    if (cur->k == LCmd::K::daimon) {
      res.k = MachineResult::K::converges;
      res.steps = steps;
      return res;
    }
    if (cur->k == LCmd::K::omega) {
      res.k = MachineResult::K::diverges;
      res.steps = steps;
      return res;
    }
    const DClo* d = rho->get(cur->head);
    if (!d) {
      res.k = MachineResult::K::stuck;
      res.free_head = cur->head;
      res.steps = steps;
      return res;
    }
    auto it = d->d->fields.find(cur->iset);
    if (it == d->d->fields.end()) {
      // missing field: implicit Ω
      res.k = MachineResult::K::diverges;
      res.steps = steps + 1;
      return res;
    }
    auto next = std::make_shared<LEnv>();
    next->parent = d->env ? d->env : base;
    for (std::size_t j = 0; j < cur->iset.size(); ++j)
      next->vars.emplace(it->second.binders[j], DClo{cur->actuals[j], rho});
    cur = it->second.cmd;
    rho = next;
  }
  res.k = MachineResult::K::fuel;
  return res;
}

}  // namespace abt::lud
