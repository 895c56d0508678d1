#include "abt/frontends/pcf.hpp"

#include <cctype>
#include <map>
#include <set>

namespace abt::pcf {

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
  bool word_boundary(std::size_t j) {
    return j >= src.size() ||
           (!std::isalnum(static_cast<unsigned char>(src[j])) &&
            src[j] != '_');
  }
  bool eat_kw(const std::string& kw) {
    skip();
    if (src.compare(i, kw.size(), kw) == 0 && word_boundary(i + kw.size())) {
      i += kw.size();
      return true;
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
    if (start == i) throw ParseError(std::string("expected an identifier or constant") + at());
    return src.substr(start, i - start);
  }
  void expect(char c) {
    skip();
    if (i >= src.size() || src[i] != c)
      throw ParseError(std::string("expected '") + c + "' in Pcf input");
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
  bool eat2(const char* s) {
    skip();
    if (i + 1 < src.size() && src[i] == s[0] && src[i + 1] == s[1]) {
      i += 2;
      return true;
    }
    return false;
  }
};

bool is_const_tok(const std::string& s) {
  if (s == "tt" || s == "ff") return true;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return !s.empty();
}

struct Parser {
  Lexer& lx;
  std::vector<std::pair<std::string, TreePtr>>* env;

  TreePtr tree() {
    auto t = std::make_shared<Tree>();
    if (lx.eat('\\')) {
      while (lx.peek() != '.') t->binders.push_back(lx.ident());
      lx.expect('.');
    }
    bool kw_case = lx.eat_kw("case");
    std::string h = lx.ident();
    if (is_const_tok(h)) {
      t->head.is_const = true;
      t->head.cst = h;
    } else {
      t->head.var = h;
    }
    // arguments: parenthesized trees
    while (lx.peek() == '(') {
      lx.expect('(');
      t->args.push_back(tree());
      lx.expect(')');
    }
    if (kw_case || peek_arms()) {
      lx.expect('[');
      if (lx.eat(']')) return t;
      std::set<std::string> seen;
      while (true) {
        std::string c = lx.ident();
        if (!is_const_tok(c)) throw ParseError(std::string("case label must be a constant") + lx.at());
        if (!seen.insert(c).second)
          throw ParseError("duplicate case label " + c);
        if (!lx.eat2("=>")) throw ParseError(std::string("expected '=>' in case arm") + lx.at());
        t->arms.push_back({c, tree()});
        if (lx.eat(']')) break;
        lx.expect(',');
      }
    }
    return t;
  }

  // an '[' right here opens case arms only when not a binding list
  bool peek_arms() {
    if (lx.peek() != '[') return false;
    std::size_t save = lx.i;
    lx.expect('[');
    bool arms = true;
    try {
      lx.ident();
      lx.skip();
      // a binding begins "name <-"
      if (lx.i + 1 < lx.src.size() && lx.src[lx.i] == '<' &&
          lx.src[lx.i + 1] == '-')
        arms = false;
    } catch (const ParseError&) {
      arms = false;
    }
    lx.i = save;
    return arms;
  }

  void bindings() {
    while (lx.peek() == '[') {
      lx.expect('[');
      while (true) {
        std::string name = lx.ident();
        if (!lx.eat2("<-")) throw ParseError(std::string("expected '<-' in binding") + lx.at());
        TreePtr bound = tree();
        bindings();  // nested binding lists attach to the bound tree
        for (auto& [n, _] : *env)
          if (n == name) throw ParseError("duplicate binding " + name);
        env->push_back({name, bound});
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
  p.term = pp.tree();
  pp.bindings();
  if (!lx.done()) throw ParseError(std::string("trailing input after Pcf tree") + lx.at());
  return p;
}

namespace {

Move const_move(const std::string& tok) { return Move::constant(tok); }

struct Compiler {
  bool annotate = false;
  long next_tok = 0;
  std::string mint() { return "p" + std::to_string(next_tok++); }

  // scope: variable -> (block token, index); ret: the binder token of the
  // value root of the current expression (constants point there).
  CNodePtr node(const TreePtr& t,
                std::map<std::string, std::pair<std::string, long>> sc,
                const std::string& ret) {
    Move head;
    std::string hbind;
    if (t->head.is_const) {
      head = const_move(t->head.cst);
      hbind = ret;
    } else {
      auto it = sc.find(t->head.var);
      if (it != sc.end()) {
        head = Move::numeral(it->second.second);
        hbind = it->second.first;
      } else {
        head = Move::named(t->head.var);
      }
    }
    std::vector<CBranch> kids;
    for (std::size_t j = 0; j < t->args.size(); ++j) {
      const TreePtr& a = t->args[j];
      std::string tok = mint();
      auto inner = sc;
      for (std::size_t b = 0; b < a->binders.size(); ++b)
        inner[a->binders[b]] = {tok, static_cast<long>(b + 1)};
      // an argument opens a fresh value root
      kids.push_back(CBranch{Move::numeral(static_cast<long>(j + 1)), tok,
                             annotate ? static_cast<int>(a->binders.size())
                                      : -1,
                             node(a, inner, tok)});
    }
    for (const auto& [c, b] : t->arms) {
      std::string tok = mint();
      auto inner = sc;
      for (std::size_t k = 0; k < b->binders.size(); ++k)
        inner[b->binders[k]] = {tok, static_cast<long>(k + 1)};
      // a case arm keeps the outer return address
      kids.push_back(CBranch{const_move(c), tok,
                             annotate ? static_cast<int>(b->binders.size())
                                      : -1,
                             node(b, inner, ret)});
    }
    return make_cnode(
        head, hbind, std::move(kids), nullptr,
        annotate ? static_cast<int>(t->args.size() + t->arms.size()) : -1);
  }

  CTree tree(const TreePtr& t) {
    std::string tok = mint();
    std::map<std::string, std::pair<std::string, long>> sc;
    for (std::size_t b = 0; b < t->binders.size(); ++b)
      sc[t->binders[b]] = {tok, static_cast<long>(b + 1)};
    return CTree{tok, annotate ? static_cast<int>(t->binders.size()) : -1,
                 node(t, sc, tok)};
  }
};

}  // namespace

CTree compile(const TreePtr& t, bool annotate) {
  Compiler c;
  c.annotate = annotate;
  return c.tree(t);
}

Compiled compile_program(const Parsed& p, bool annotate) {
  Compiled out;
  CTree main = compile(p.term, annotate);
  out.phi = compile_concrete(main);
  out.eam.main = main;
  for (const auto& [name, t] : p.env) {
    CTree entry = compile(t, annotate);
    Move key = Move::named(name);
    out.psi.entries[key] = compile_concrete(entry);
    out.eam.entries[key] = entry;
  }
  return out;
}

}  // namespace abt::pcf
