#include "abt/moves.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace abt {

IndexSet make_index_set(std::vector<long> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

std::string index_set_str(const IndexSet& s) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out << ',';
    out << s[i];
  }
  out << '}';
  return out.str();
}

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

std::string cbv_payload_str(const std::optional<long>& p) {
  return p ? std::to_string(*p) : "•";
}

IndexSet parse_index_set(const std::string& s, std::size_t& i) {
  if (i >= s.size() || s[i] != '{')
    throw ParseError("bad index set in move token: " + s);
  ++i;
  std::vector<long> xs;
  while (i < s.size() && s[i] != '}') {
    if (s[i] == ',') {
      ++i;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw ParseError("bad index set in move token: " + s);
    long v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
      v = v * 10 + (s[i++] - '0');
    xs.push_back(v);
  }
  if (i >= s.size()) throw ParseError("unterminated index set: " + s);
  ++i;  // '}'
  return make_index_set(std::move(xs));
}

Move parse_cbv(const std::string& tok) {
  // ?•  ?5  !•  !5  (?•,x)  (!5,alpha)
  std::string body = tok;
  std::string var;
  if (body.front() == '(') {
    if (body.back() != ')') throw ParseError("bad cbv move: " + tok);
    body = body.substr(1, body.size() - 2);
    auto comma = body.rfind(',');
    if (comma == std::string::npos) throw ParseError("bad cbv move: " + tok);
    var = body.substr(comma + 1);
    body = body.substr(0, comma);
  }
  if (body.empty() || (body[0] != '?' && body[0] != '!'))
    throw ParseError("bad cbv move: " + tok);
  bool answer = body[0] == '!';
  std::string payload = body.substr(1);
  if (payload == "•") return Move::cbv(answer, std::nullopt, var);
  if (!all_digits(payload)) throw ParseError("bad cbv move: " + tok);
  return Move::cbv(answer, std::stol(payload), var);
}

}  // namespace

std::string Move::str() const {
  struct V {
    std::string operator()(const Move::Bullet&) const { return "•"; }
    std::string operator()(const Move::Numeral& n) const {
      return std::to_string(n.value);
    }
    std::string operator()(const Move::Const& c) const {
      return all_digits(c.tok) ? "#" + c.tok : c.tok;
    }
    std::string operator()(const Move::Named& n) const { return n.tok; }
    std::string operator()(const Move::Cbv& c) const {
      std::string body = (c.answer ? "!" : "?") + cbv_payload_str(c.payload);
      if (c.var.empty()) return body;
      return "(" + body + "," + c.var + ")";
    }
    std::string operator()(const Move::LudicsPair& p) const {
      return std::to_string(p.index) + "." + index_set_str(p.args);
    }
    std::string operator()(const Move::LudicsCall& p) const {
      return p.var + "." + index_set_str(p.args);
    }
    std::string operator()(const Move::Star&) const { return "*"; }
    std::string operator()(const Move::Omega&) const { return "Ω"; }
    std::string operator()(const Move::Daimon&) const { return "✠"; }
  };
  return std::visit(V{}, rep);
}

Move Move::parse(const std::string& tok) {
  if (tok.empty()) throw ParseError("empty move token");
  if (tok == "•") return Move::bullet();
  if (tok == "*") return Move::star();
  if (tok == "Ω" || tok == "Omega") return Move::omega();
  if (tok == "✠" || tok == "Daimon") return Move::daimon();
  if (tok == "tt" || tok == "ff") return Move::constant(tok);
  if (tok[0] == '#') {
    std::string rest = tok.substr(1);
    if (!all_digits(rest)) throw ParseError("bad constant token: " + tok);
    return Move::constant(rest);
  }
  if (all_digits(tok)) return Move::numeral(std::stol(tok));
  if (tok[0] == '?' || tok[0] == '!' || tok[0] == '(') return parse_cbv(tok);
  auto dot = tok.find(".{");
  if (dot != std::string::npos) {
    std::string head = tok.substr(0, dot);
    std::size_t i = dot + 1;
    IndexSet set = parse_index_set(tok, i);
    if (i != tok.size()) throw ParseError("bad ludics move: " + tok);
    if (all_digits(head)) return Move::ludics_pair(std::stol(head), set);
    return Move::ludics_call(head, set);
  }
  return Move::named(tok);
}

}  // namespace abt
