#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace abt {

struct AbtError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : AbtError { using AbtError::AbtError; };
struct ScopeError : AbtError { using AbtError::AbtError; };
struct PointerOutOfRange : AbtError { using AbtError::AbtError; };
struct MalformedState : AbtError { using AbtError::AbtError; };
struct Unreachable : AbtError { using AbtError::AbtError; };
struct IllegalQuery : AbtError { using AbtError::AbtError; };
struct DanglingAddress : AbtError { using AbtError::AbtError; };
struct NotNormalForm : AbtError { using AbtError::AbtError; };
struct StuckState : AbtError { using AbtError::AbtError; };
struct TypeError : AbtError { using AbtError::AbtError; };

// Finite set of naturals used by ludics moves; kept sorted and deduplicated.
using IndexSet = std::vector<long>;

IndexSet make_index_set(std::vector<long> xs);
std::string index_set_str(const IndexSet& s);

// The move alphabet A. The variant order fixes the canonical branch
// ordering used everywhere (traces are deterministic because of it).
struct Move {
  struct Bullet {
    auto operator<=>(const Bullet&) const = default;
  };
  struct Numeral {
    long value = 0;
    auto operator<=>(const Numeral&) const = default;
  };
  // Underlined constants of Pcf (tt, ff, underlined integers).
  struct Const {
    std::string tok;
    auto operator<=>(const Const&) const = default;
  };
  struct Named {
    std::string tok;
    auto operator<=>(const Named&) const = default;
  };
  // Call-by-value moves: ?payload and !payload, optionally paired with a
  // variable for free occurrences ((?•,x), (!5,alpha), ...). payload
  // nullopt means •.
  struct Cbv {
    int answer = 0;  // 0: ?   1: !
    std::optional<long> payload;
    std::string var;  // empty: unpaired
    auto operator<=>(const Cbv&) const = default;
  };
  // Ludics branch move (j,K).
  struct LudicsPair {
    long index = 0;
    IndexSet args;
    auto operator<=>(const LudicsPair&) const = default;
  };
  // Ludics head move x·I with x free.
  struct LudicsCall {
    std::string var;
    IndexSet args;
    auto operator<=>(const LudicsCall&) const = default;
  };
  struct Star {
    auto operator<=>(const Star&) const = default;
  };
  struct Omega {
    auto operator<=>(const Omega&) const = default;
  };
  struct Daimon {
    auto operator<=>(const Daimon&) const = default;
  };

  using Rep = std::variant<Bullet, Numeral, Const, Named, Cbv, LudicsPair,
                           LudicsCall, Star, Omega, Daimon>;
  Rep rep;

  Move() : rep(Bullet{}) {}
  explicit Move(Rep r) : rep(std::move(r)) {}

  static Move bullet() { return Move(Bullet{}); }
  static Move numeral(long n) { return Move(Numeral{n}); }
  static Move constant(std::string tok) { return Move(Const{std::move(tok)}); }
  static Move named(std::string tok) { return Move(Named{std::move(tok)}); }
  static Move cbv(bool answer, std::optional<long> payload,
                  std::string var = "") {
    return Move(Cbv{answer ? 1 : 0, payload, std::move(var)});
  }
  static Move ludics_pair(long j, IndexSet k) {
    return Move(LudicsPair{j, make_index_set(std::move(k))});
  }
  static Move ludics_call(std::string x, IndexSet i) {
    return Move(LudicsCall{std::move(x), make_index_set(std::move(i))});
  }
  static Move star() { return Move(Star{}); }
  static Move omega() { return Move(Omega{}); }
  static Move daimon() { return Move(Daimon{}); }

  bool is_bullet() const { return std::holds_alternative<Bullet>(rep); }
  bool is_star() const { return std::holds_alternative<Star>(rep); }
  bool is_numeral() const { return std::holds_alternative<Numeral>(rep); }
  bool is_omega() const { return std::holds_alternative<Omega>(rep); }
  bool is_daimon() const { return std::holds_alternative<Daimon>(rep); }
  long numeral_value() const { return std::get<Numeral>(rep).value; }

  // Canonical printing; injective over the whole alphabet.
  std::string str() const;

  // Inverse of str() for a single token (see text.hpp for the lexer).
  static Move parse(const std::string& tok);

  auto operator<=>(const Move&) const = default;
  bool operator==(const Move&) const = default;
};

// Backward pointer of a player move: an offset counting opponent moves
// back to the pointed one, or free.
struct Pointer {
  long off = -1;  // -1: free

  static Pointer free() { return Pointer{-1}; }
  static Pointer bound(long i) { return Pointer{i}; }
  bool is_free() const { return off < 0; }
  bool is_bound() const { return off >= 0; }
  std::string str() const { return is_free() ? "_" : std::to_string(off); }

  auto operator<=>(const Pointer&) const = default;
};

}  // namespace abt
