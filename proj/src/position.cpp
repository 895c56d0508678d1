#include "abt/position.hpp"

#include <sstream>

namespace abt {

Pos extend_opp(Pos p, Move m, long stamp) {
  auto s = std::make_shared<Seat>();
  s->player = false;
  s->move = std::move(m);
  s->stamp = stamp;
  s->prev = std::move(p);
  return s;
}

Pos extend_player(Pos p, Move m, Pointer ptr) {
  auto s = std::make_shared<Seat>();
  s->player = true;
  s->move = std::move(m);
  s->ptr = ptr;
  s->prev = std::move(p);
  return s;
}

std::size_t pos_length(Pos p) {
  std::size_t n = 0;
  for (; p; p = p->prev) ++n;
  return n;
}

bool pos_is_query(Pos p) { return p && !p->player; }

std::vector<const Seat*> pos_seats(Pos p) {
  std::vector<const Seat*> out;
  for (; p; p = p->prev) out.push_back(p.get());
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<Move> opp_path(Pos p) {
  std::vector<Move> out;
  for (; p; p = p->prev)
    if (!p->player) out.push_back(p->move);
  std::reverse(out.begin(), out.end());
  return out;
}

bool pos_equal(Pos a, Pos b) {
  for (; a && b; a = a->prev, b = b->prev) {
    if (a == b) return true;
    if (a->player != b->player || a->move != b->move) return false;
    if (a->player ? a->ptr != b->ptr : a->stamp != b->stamp) return false;
  }
  return !a && !b;
}

bool pos_equal_erased(Pos a, Pos b) {
  for (; a && b; a = a->prev, b = b->prev) {
    if (a->player != b->player || a->move != b->move) return false;
    if (a->player && a->ptr != b->ptr) return false;
  }
  return !a && !b;
}

Pos erase(Pos p) {
  if (!p) return nullptr;
  Pos prev = erase(p->prev);
  return p->player ? extend_player(prev, p->move, p->ptr)
                   : extend_opp(prev, p->move, 0);
}

long dnumber(Pos q) {
  if (!pos_is_query(q)) throw MalformedState("dnumber on a non-query");
  return q->stamp;
}

Pos pop(Pos q) {
  if (!pos_is_query(q) || !q->prev || !q->prev->player || !q->prev->prev)
    throw PointerOutOfRange("pop past the root of a position");
  return q->prev->prev;
}

Pos pop_n(Pos q, long i) {
  for (; i > 0; --i) q = pop(q);
  return q;
}

long pop_dnumber(Pos q, long i) { return dnumber(pop_n(q, i)); }

namespace {
std::string render(Pos p, bool stamps) {
  std::ostringstream out;
  for (const Seat* s : pos_seats(p)) {
    if (s->player) {
      out << '[' << s->move.str() << '|' << s->ptr.str() << ']';
    } else {
      out << '<' << s->move.str();
      if (stamps && s->stamp) out << '@' << s->stamp;
      out << '>';
    }
  }
  return out.str();
}
}  // namespace

std::string pos_str(Pos p) { return render(p, true); }
std::string pos_str_erased(Pos p) { return render(p, false); }

}  // namespace abt
