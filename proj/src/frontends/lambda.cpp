#include "abt/frontends/lambda.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace abt::lam {

TermPtr var(std::string name) {
  auto t = std::make_shared<Term>();
  t->k = Term::K::var;
  t->name = std::move(name);
  return t;
}

TermPtr lam(std::vector<std::string> binders, TermPtr body) {
  if (binders.empty()) return body;
  if (body->k == Term::K::lam) {
    // merge consecutive abstractions into one block
    auto merged = binders;
    merged.insert(merged.end(), body->binders.begin(), body->binders.end());
    return lam(std::move(merged), body->body);
  }
  auto t = std::make_shared<Term>();
  t->k = Term::K::lam;
  t->binders = std::move(binders);
  t->body = std::move(body);
  return t;
}

TermPtr app(TermPtr fn, TermPtr arg) {
  auto t = std::make_shared<Term>();
  t->k = Term::K::app;
  t->fn = std::move(fn);
  t->arg = std::move(arg);
  return t;
}

TermPtr apps(TermPtr fn, const std::vector<TermPtr>& args) {
  for (const auto& a : args) fn = app(fn, a);
  return fn;
}

namespace {

// Spine view: t = head b1 .. bn with head not an application.
struct Spine {
  TermPtr head;
  std::vector<TermPtr> args;
};

Spine spine(TermPtr t) {
  Spine s;
  while (t->k == Term::K::app) {
    s.args.push_back(t->arg);
    t = t->fn;
  }
  std::reverse(s.args.begin(), s.args.end());
  s.head = t;
  return s;
}

}  // namespace

bool is_normal(const TermPtr& t) {
  switch (t->k) {
    case Term::K::var:
      return true;
    case Term::K::lam:
      return is_normal(t->body);
    case Term::K::app: {
      Spine s = spine(t);
      if (s.head->k != Term::K::var) return false;
      for (const auto& a : s.args)
        if (!is_normal(a)) return false;
      return true;
    }
  }
  return false;
}

std::string term_str(const TermPtr& t) {
  std::ostringstream out;
  switch (t->k) {
    case Term::K::var:
      out << t->name;
      break;
    case Term::K::lam: {
      out << "(\\";
      for (std::size_t i = 0; i < t->binders.size(); ++i)
        out << (i ? " " : "") << t->binders[i];
      out << ". " << term_str(t->body) << ')';
      break;
    }
    case Term::K::app: {
      Spine s = spine(t);
      if (s.head->k == Term::K::var)
        out << term_str(s.head);
      else
        out << '(' << term_str(s.head) << ')';
      for (const auto& a : s.args) {
        out << ' ';
        if (a->k == Term::K::var)
          out << term_str(a);
        else
          out << '(' << term_str(a) << ')';
      }
      break;
    }
  }
  return out.str();
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
      } else if (src[i] == ';') {  // comment to end of line
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
  bool peek_arrow() {
    skip();
    return i + 1 < src.size() && src[i] == '<' && src[i + 1] == '-';
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
  void expect(char c) {
    skip();
    if (i >= src.size() || src[i] != c)
      throw ParseError(std::string("expected '") + c + "'");
    ++i;
  }
  bool eat(char c) {
    skip();
    if (i < src.size() && src[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
};

struct TermParser {
  Lexer& lx;
  std::vector<std::pair<std::string, TermPtr>>* env;  // flattened bindings

  TermPtr atom() {
    char c = lx.peek();
    if (c == '(') {
      lx.expect('(');
      TermPtr t = term();
      lx.expect(')');
      return maybe_bindings(t);
    }
    if (c == '\\' || c == '\xce') {  // '\' or UTF-8 λ
      return lambda();
    }
    return var(lx.ident());
  }

  TermPtr lambda() {
    if (!lx.eat('\\')) {
      // UTF-8 λ (0xce 0xbb)
      lx.expect('\xce');
      lx.expect('\xbb');
    }
    std::vector<std::string> binders;
    while (lx.peek() != '.') binders.push_back(lx.ident());
    lx.expect('.');
    if (binders.empty()) throw ParseError(std::string("lambda without binders") + lx.at());
    return lam(std::move(binders), term());
  }

  TermPtr term() {
    char c = lx.peek();
    if (c == '\\' || c == '\xce') return lambda();
    TermPtr t = atom();
    while (true) {
      char d = lx.peek();
      if (d == '(' || d == '\\' || d == '\xce' ||
          std::isalnum(static_cast<unsigned char>(d)) || d == '_') {
        t = app(t, atom());
        continue;
      }
      break;
    }
    return maybe_bindings(t);
  }

  TermPtr maybe_bindings(TermPtr t) {
    while (lx.peek() == '[') {
      lx.expect('[');
      while (true) {
        std::string name = lx.ident();
        if (!lx.peek_arrow()) throw ParseError(std::string("expected '<-' in binding") + lx.at());
        lx.i += 2;
        TermPtr bound = term();
        for (auto& [n, _] : *env)
          if (n == name)
            throw ParseError("duplicate counter binding for " + name);
        env->push_back({name, bound});
        if (lx.eat(']')) break;
        lx.expect(',');
      }
    }
    return t;
  }
};

}  // namespace

Parsed parse(const std::string& text) {
  Lexer lx{text};
  Parsed p;
  TermParser tp{lx, &p.env};
  p.term = tp.term();
  if (!lx.done()) throw ParseError(std::string("trailing input after λ-term") + lx.at());
  return p;
}

TermPtr parse_term(const std::string& text) {
  Parsed p = parse(text);
  if (!p.env.empty()) throw ParseError("unexpected bindings");
  return p.term;
}

// ---------------------------------------------------------------------
// Compilation to concrete abstract Böhm trees

namespace {

// Free variables named Omega / Daimon become the ludics constants so that
// the separation fixtures observe Ω and ✠ directly.
Move free_move(const std::string& name) { return Move::parse(name); }

struct Scope {
  // binder name -> (block token, 1-based index within the block)
  std::map<std::string, std::pair<std::string, long>> vars;
};

struct Compiler {
  bool star_mode = false;
  bool annotate = false;
  long next_tok = 0;

  std::string mint() { return "b" + std::to_string(next_tok++); }

  // Compile the body of a block (a P); scope already contains the block's
  // binders.
  CNodePtr node(const TermPtr& t, Scope sc) {
    Spine s = spine(t);
    if (s.head->k == Term::K::var) {
      Move head;
      std::string hbind;
      auto it = sc.vars.find(s.head->name);
      if (it != sc.vars.end()) {
        head = Move::numeral(it->second.second);
        hbind = it->second.first;
      } else {
        head = free_move(s.head->name);
      }
      return make_cnode(head, hbind, branches(s.args, sc, 1), nullptr,
                        annotate ? static_cast<int>(s.args.size()) : -1);
    }
    // A redex at the head: only the * pipeline accepts it.
    if (!star_mode) throw NotNormalForm("redex in a Böhm tree");
    std::vector<CBranch> kids = branches(s.args, sc, 1);
    // the function hangs under the * branch
    const TermPtr& fn = s.head;
    std::string tok = mint();
    Scope inner = sc;
    std::vector<std::string> binders =
        fn->k == Term::K::lam ? fn->binders : std::vector<std::string>{};
    for (std::size_t j = 0; j < binders.size(); ++j)
      inner.vars[binders[j]] = {tok, static_cast<long>(j + 1)};
    TermPtr body = fn->k == Term::K::lam ? fn->body : fn;
    kids.push_back(CBranch{Move::star(), tok,
                           annotate ? static_cast<int>(binders.size()) : -1,
                           node(body, inner)});
    return make_cnode(Move::star(), "", std::move(kids), nullptr,
                      annotate ? static_cast<int>(s.args.size()) : -1);
  }

  std::vector<CBranch> branches(const std::vector<TermPtr>& args, Scope sc,
                                long first) {
    std::vector<CBranch> kids;
    for (std::size_t j = 0; j < args.size(); ++j) {
      const TermPtr& a = args[j];
      std::string tok = mint();
      Scope inner = sc;
      std::vector<std::string> binders =
          a->k == Term::K::lam ? a->binders : std::vector<std::string>{};
      for (std::size_t b = 0; b < binders.size(); ++b)
        inner.vars[binders[b]] = {tok, static_cast<long>(b + 1)};
      TermPtr body = a->k == Term::K::lam ? a->body : a;
      kids.push_back(CBranch{Move::numeral(first + static_cast<long>(j)),
                             tok,
                             annotate ? static_cast<int>(binders.size()) : -1,
                             node(body, inner)});
    }
    return kids;
  }

  CTree tree(const TermPtr& t) {
    std::string tok = mint();
    Scope sc;
    std::vector<std::string> binders =
        t->k == Term::K::lam ? t->binders : std::vector<std::string>{};
    for (std::size_t b = 0; b < binders.size(); ++b)
      sc.vars[binders[b]] = {tok, static_cast<long>(b + 1)};
    TermPtr body = t->k == Term::K::lam ? t->body : t;
    return CTree{tok, annotate ? static_cast<int>(binders.size()) : -1,
                 node(body, sc)};
  }
};

}  // namespace

CTree compile_bohm(const TermPtr& t, Mode mode) {
  if (mode != Mode::star && !is_normal(t))
    throw NotNormalForm("compile_bohm needs a normal form");
  Compiler c;
  c.star_mode = mode == Mode::star;
  c.annotate = mode == Mode::bohm_eta;
  return c.tree(t);
}

CTree compile_lambda_star(const TermPtr& t) {
  return compile_bohm(t, Mode::star);
}

Compiled compile_program(const Parsed& p, Mode mode) {
  Compiled out;
  CTree main = compile_bohm(p.term, mode);
  out.phi = compile_concrete(main);
  out.eam.main = main;
  for (const auto& [name, t] : p.env) {
    CTree entry = compile_bohm(t, mode);
    Move key = free_move(name);
    out.psi.entries[key] =
        Rooted{compile_concrete(entry).tree, entry.root_binders};
    out.eam.entries[key] = entry;
  }
  return out;
}

// ---------------------------------------------------------------------
// Normal-order normalizer (the λ frontend's reference machine)

namespace {

void free_vars(const TermPtr& t, std::map<std::string, bool>& out) {
  switch (t->k) {
    case Term::K::var:
      out[t->name] = true;
      break;
    case Term::K::lam: {
      std::map<std::string, bool> inner;
      free_vars(t->body, inner);
      for (const auto& b : t->binders) inner.erase(b);
      for (auto& [n, v] : inner) out[n] = v;
      break;
    }
    case Term::K::app:
      free_vars(t->fn, out);
      free_vars(t->arg, out);
      break;
  }
}

thread_local long fresh_counter = 0;

TermPtr subst(const TermPtr& t, const std::string& x, const TermPtr& v) {
  switch (t->k) {
    case Term::K::var:
      return t->name == x ? v : t;
    case Term::K::app:
      return app(subst(t->fn, x, v), subst(t->arg, x, v));
    case Term::K::lam: {
      for (const auto& b : t->binders)
        if (b == x) return t;  // x shadowed
      std::map<std::string, bool> fv;
      free_vars(v, fv);
      std::vector<std::string> binders = t->binders;
      TermPtr body = t->body;
      for (auto& b : binders) {
        if (fv.count(b)) {
          std::string nb = b + "#" + std::to_string(fresh_counter++);
          body = subst(body, b, var(nb));
          b = nb;
        }
      }
      auto out = std::make_shared<Term>();
      out->k = Term::K::lam;
      out->binders = std::move(binders);
      out->body = subst(body, x, v);
      return out;
    }
  }
  return t;
}

// One leftmost-outermost step; nullptr when t is already normal.
TermPtr step(const TermPtr& t) {
  switch (t->k) {
    case Term::K::var:
      return nullptr;
    case Term::K::lam: {
      TermPtr b = step(t->body);
      if (!b) return nullptr;
      auto out = std::make_shared<Term>();
      out->k = Term::K::lam;
      out->binders = t->binders;
      out->body = b;
      return out;
    }
    case Term::K::app: {
      if (t->fn->k == Term::K::lam) {
        const auto& fn = t->fn;
        std::vector<std::string> rest(fn->binders.begin() + 1,
                                      fn->binders.end());
        TermPtr body = fn->body;
        // the argument's free variables must not be captured by the
        // remaining binders of the block
        std::map<std::string, bool> fv;
        free_vars(t->arg, fv);
        for (auto& b : rest) {
          if (fv.count(b)) {
            std::string nb = b + "#" + std::to_string(fresh_counter++);
            body = subst(body, b, var(nb));
            b = nb;
          }
        }
        body = subst(body, fn->binders.front(), t->arg);
        return lam(std::move(rest), body);
      }
      if (TermPtr f = step(t->fn)) return app(f, t->arg);
      if (TermPtr a = step(t->arg)) return app(t->fn, a);
      return nullptr;
    }
  }
  return nullptr;
}

}  // namespace

TermPtr normalize(const TermPtr& t, long fuel) {
  TermPtr cur = t;
  while (fuel-- > 0) {
    TermPtr next = step(cur);
    if (!next) return cur;
    cur = next;
  }
  throw StuckState("normalizer ran out of fuel");
}

Move head_observable(const TermPtr& nf) {
  std::vector<std::string> top =
      nf->k == Term::K::lam ? nf->binders : std::vector<std::string>{};
  TermPtr body = nf->k == Term::K::lam ? nf->body : nf;
  Spine s = spine(body);
  if (s.head->k != Term::K::var)
    throw MalformedState("head observable of a non-normal form");
  for (std::size_t i = 0; i < top.size(); ++i)
    if (top[i] == s.head->name)
      return Move::numeral(static_cast<long>(i + 1));
  return free_move(s.head->name);
}

}  // namespace abt::lam
