#include "abt/text.hpp"

#include <cctype>
#include <sstream>

namespace abt {

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

  void skip_ws() {
    while (i < src.size() &&
           std::isspace(static_cast<unsigned char>(src[i])))
      ++i;
  }
  bool done() {
    skip_ws();
    return i >= src.size();
  }
  char peek() {
    skip_ws();
    return i < src.size() ? src[i] : '\0';
  }
  // Single-character structure tokens and move/word tokens. A '(' that
  // opens a cbv pair move ((?•,x) ...) is lexed as one move token.
  std::string next() {
    skip_ws();
    if (i >= src.size()) throw ParseError("unexpected end of input");
    char c = src[i];
    if (c == '(' && i + 1 < src.size() &&
        (src[i + 1] == '?' || src[i + 1] == '!')) {
      // a cbv pair move ((?•,x), (!5,a)): one token, no spaces inside
      auto close = src.find(')', i);
      if (close != std::string::npos) {
        std::string tok = src.substr(i, close - i + 1);
        if (tok.find_first_of(" \t\n") == std::string::npos &&
            tok.find('(', 1) == std::string::npos) {
          i = close + 1;
          return tok;
        }
      }
    }
    if (c == '(' || c == ')' || c == '[' || c == ']' || c == ',') {
      ++i;
      return std::string(1, c);
    }
    if (c == '<' && i + 1 < src.size() && src[i + 1] == '-') {
      i += 2;
      return "<-";
    }
    std::size_t start = i;
    while (i < src.size()) {
      char d = src[i];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' ||
          d == ')' || d == '[' || d == ']' || d == ',')
        break;
      if (d == '{') {  // index sets keep their commas
        auto close = src.find('}', i);
        if (close == std::string::npos)
          throw ParseError(std::string("unterminated index set") + at());
        i = close + 1;
        continue;
      }
      ++i;
    }
    if (start == i) throw ParseError(std::string("stray character in input") + at());
    return src.substr(start, i - start);
  }
  std::string expect(const std::string& t) {
    auto got = next();
    if (got != t) throw ParseError("expected '" + t + "', got '" + got + "'");
    return got;
  }
};

struct Annotated {
  Move move;
  int sup = -1;
};

Annotated parse_annotated(const std::string& tok) {
  auto caret = tok.rfind('^');
  if (caret != std::string::npos && caret + 1 < tok.size()) {
    bool digits = true;
    for (auto j = caret + 1; j < tok.size(); ++j)
      digits = digits && std::isdigit(static_cast<unsigned char>(tok[j]));
    if (digits)
      return {Move::parse(tok.substr(0, caret)),
              std::stoi(tok.substr(caret + 1))};
  }
  return {Move::parse(tok), -1};
}

StrategyPtr parse_node(Lexer& lx);

Branch parse_branch(Lexer& lx) {
  lx.expect("(");
  auto om = parse_annotated(lx.next());
  StrategyPtr sub = parse_node(lx);
  lx.expect(")");
  return Branch{om.move, om.sup, sub};
}

StrategyPtr parse_node(Lexer& lx) {
  lx.expect("(");
  auto pm = parse_annotated(lx.next());
  auto ptr_tok = lx.next();
  Pointer k = ptr_tok == "_" ? Pointer::free() : Pointer::bound(std::stol(ptr_tok));
  std::vector<Branch> kids;
  while (lx.peek() == '(') kids.push_back(parse_branch(lx));
  lx.expect(")");
  return make_node(pm.move, k, std::move(kids), nullptr, pm.sup);
}

Rooted parse_rooted(Lexer& lx) {
  // strategy ::= node | '(' '^'nat node ')'
  std::size_t save = lx.i;
  lx.expect("(");
  if (lx.peek() != '(') {
    std::string tok = lx.next();
    if (!tok.empty() && tok[0] == '^') {
      int rb = std::stoi(tok.substr(1));
      StrategyPtr n = parse_node(lx);
      lx.expect(")");
      return Rooted{n, rb};
    }
  }
  lx.i = save;
  return Rooted{parse_node(lx), -1};
}

void print_move(std::ostringstream& out, const Move& m, int sup) {
  out << m.str();
  if (sup >= 0) out << '^' << sup;
}

void print_node(std::ostringstream& out, const StrategyPtr& n) {
  out << '(';
  print_move(out, n->player, n->arity);
  out << ' ' << n->ptr.str();
  for (const Branch& b : n->kids()) {
    out << " (";
    print_move(out, b.key, b.binders);
    out << ' ';
    print_node(out, b.sub);
    out << ')';
  }
  if (n->has_gen()) out << " ...";
  out << ')';
}

}  // namespace

std::string strategy_str(const Rooted& phi) {
  std::ostringstream out;
  if (phi.root_binders >= 0) {
    out << "(^" << phi.root_binders << ' ';
    print_node(out, phi.tree);
    out << ')';
  } else {
    print_node(out, phi.tree);
  }
  return out.str();
}

std::string counter_str(const CounterStrategy& psi) {
  std::ostringstream out;
  out << '[';
  bool first = true;
  for (const auto& [name, rooted] : psi.entries) {
    if (!first) out << ", ";
    first = false;
    out << name.str();
    if (rooted.root_binders >= 0) out << '^' << rooted.root_binders;
    out << " <- ";
    // entry trees print without the root-binder wrapper (it is on the name)
    print_node(out, rooted.tree);
  }
  if (psi.gen) out << (first ? "..." : ", ...");
  out << ']';
  return out.str();
}

Rooted parse_strategy(const std::string& text) {
  Lexer lx{text};
  Rooted r = parse_rooted(lx);
  if (!lx.done()) throw ParseError(std::string("trailing input after strategy") + lx.at());
  return r;
}

Program parse_program(const std::string& text) {
  Lexer lx{text};
  Program p;
  p.phi = parse_rooted(lx);
  if (!lx.done() && lx.peek() == '[') {
    lx.expect("[");
    while (true) {
      auto nm = parse_annotated(lx.next());
      lx.expect("<-");
      Rooted entry = parse_rooted(lx);
      if (nm.sup >= 0) entry.root_binders = nm.sup;
      if (!p.psi.entries.emplace(nm.move, entry).second)
        throw ParseError("duplicate counter-strategy entry " + nm.move.str());
      auto t = lx.next();
      if (t == "]") break;
      if (t != ",") throw ParseError(std::string("expected ',' or ']' in bindings") + lx.at());
    }
  }
  if (!lx.done()) throw ParseError(std::string("trailing input after program") + lx.at());
  return p;
}

}  // namespace abt
