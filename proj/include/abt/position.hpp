#pragma once

#include <memory>
#include <vector>

#include "abt/moves.hpp"

namespace abt {

// Positions are alternating sequences of opponent moves <a@j> and player
// moves [a|k], built once and only ever extended, so they are shared
// immutable cons cells growing backwards.
struct Seat;
using Pos = std::shared_ptr<const Seat>;

struct Seat {
  bool player = false;
  Move move;
  Pointer ptr;     // player seats
  long stamp = 0;  // opponent seats; 0 = unstamped
  Pos prev;
};

Pos extend_opp(Pos p, Move m, long stamp = 0);
Pos extend_player(Pos p, Move m, Pointer ptr);

std::size_t pos_length(Pos p);
bool pos_is_query(Pos p);  // nonempty, ends with an opponent move

// Forward-order views.
std::vector<const Seat*> pos_seats(Pos p);
std::vector<Move> opp_path(Pos p);  // opponent move names only

// Structural equality, with and without multiplexing stamps.
bool pos_equal(Pos a, Pos b);
bool pos_equal_erased(Pos a, Pos b);

// erase: drop multiplexing stamps.
Pos erase(Pos p);

// Stamp of the last opponent move of a query.
long dnumber(Pos q);

// pop: drop the trailing [a|i]<b@j> pair of a query. Throws
// PointerOutOfRange when the query is too short (a dangling pointer,
// impossible on machine-reachable states).
Pos pop(Pos q);
Pos pop_n(Pos q, long i);

// Spec operation: stamp of the last opponent move of pop^i(q).
long pop_dnumber(Pos q, long i);

std::string pos_str(Pos p);         // "<•@1>[u|_]<1@3>"
std::string pos_str_erased(Pos p);  // "<•>[u|_]<1>"

}  // namespace abt
