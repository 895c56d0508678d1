#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "abt/frontends/lambda.hpp"
#include "abt/strategy.hpp"

namespace testutil {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline std::string fixture(const std::string& name) {
  return slurp(std::string(ABT_SOURCE_DIR) + "/fixtures/" + name);
}

// ----------------------------------------------------------------------
// Random closed simply-typed η-long λ-terms, for the β-oracle tests.
// Types are built over a single base; every variable occurrence is fully
// applied and every block binds exactly the arity of its type, so the
// GAM never meets the improper termination case.

struct SimpleType {
  // arguments of the curried type; the result is the base type
  std::vector<std::shared_ptr<const SimpleType>> args;
};
using TypeRef = std::shared_ptr<const SimpleType>;

inline TypeRef base_ty() { return std::make_shared<SimpleType>(); }
inline TypeRef fn_ty(std::vector<TypeRef> args) {
  auto t = std::make_shared<SimpleType>();
  t->args = std::move(args);
  return t;
}

struct TypedVar {
  std::string name;
  TypeRef ty;
};

struct TermGen {
  std::mt19937_64 rng;
  long counter = 0;
  int budget = 0;

  explicit TermGen(std::uint64_t seed, int size_budget)
      : rng(seed), budget(size_budget) {}

  long pick(long n) {
    return std::uniform_int_distribution<long>(0, n - 1)(rng);
  }

  // An η-long normal term of type `ty` in context `ctx`. The context is
  // guaranteed to keep at least one base-typed variable in scope once a
  // block of base binders has been entered.
  abt::lam::TermPtr gen(const TypeRef& ty, std::vector<TypedVar> ctx) {
    std::vector<std::string> binders;
    for (const TypeRef& at : ty->args) {
      std::string b = "v" + std::to_string(counter++);
      binders.push_back(b);
      ctx.push_back(TypedVar{b, at});
    }
    --budget;
    // candidates: variables whose result is the base type (all of them,
    // in this grammar)
    std::vector<const TypedVar*> cands;
    std::vector<const TypedVar*> leaves;
    for (const TypedVar& v : ctx) {
      cands.push_back(&v);
      if (v.ty->args.empty()) leaves.push_back(&v);
    }
    const TypedVar* head = nullptr;
    if (budget <= 0 && !leaves.empty())
      head = leaves[static_cast<std::size_t>(pick(
          static_cast<long>(leaves.size())))];
    else
      head = cands[static_cast<std::size_t>(
          pick(static_cast<long>(cands.size())))];
    abt::lam::TermPtr t = abt::lam::var(head->name);
    for (const TypeRef& at : head->ty->args)
      t = abt::lam::app(t, gen(at, ctx));
    return abt::lam::lam(binders, t);
  }
};

struct OracleCase {
  abt::lam::TermPtr body;  // open in x1, x2
  abt::lam::TermPtr c1, c2;
  abt::lam::TermPtr closed;  // (λx1 x2. body) c1 c2
};

inline OracleCase oracle_case(std::uint64_t seed) {
  // x1 : ι→ι,  x2 : (ι→ι)→ι→ι; both closed-inhabited.
  TypeRef t_io = fn_ty({base_ty()});
  TypeRef t_hi = fn_ty({t_io, base_ty()});
  TypeRef t_main = fn_ty({base_ty(), t_io});

  TermGen g(seed, 25);
  OracleCase out;
  out.body = g.gen(t_main, {TypedVar{"x1", t_io}, TypedVar{"x2", t_hi}});
  TermGen g1(seed * 31 + 7, 8);
  out.c1 = g1.gen(t_io, {});
  TermGen g2(seed * 131 + 3, 8);
  out.c2 = g2.gen(t_hi, {});
  out.closed = abt::lam::apps(
      abt::lam::lam({"x1", "x2"}, out.body), {out.c1, out.c2});
  return out;
}

// Truncate a strategy to a number of opponent levels below the root.
inline abt::StrategyPtr truncate_tree(const abt::StrategyPtr& t, int levels) {
  std::vector<abt::Branch> kids;
  if (levels > 0)
    for (const abt::Branch& b : t->kids())
      kids.push_back(
          abt::Branch{b.key, -1, truncate_tree(b.sub, levels - 1)});
  return abt::make_node(t->player, t->ptr, std::move(kids));
}

}  // namespace testutil
