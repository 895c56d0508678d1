#include "abt/concrete.hpp"

#include <algorithm>
#include <sstream>

namespace abt {

CNode::CNode(Move h, std::string hb, std::vector<CBranch> kids,
             CBranchGen gen, int arity)
    : head(std::move(h)),
      hbind(std::move(hb)),
      arity(arity),
      kids_(std::move(kids)),
      gen_(std::move(gen)) {
  std::sort(kids_.begin(), kids_.end(),
            [](const CBranch& a, const CBranch& b) { return a.key < b.key; });
}

const CBranch* CNode::child(const Move& key) const {
  auto it = std::lower_bound(
      kids_.begin(), kids_.end(), key,
      [](const CBranch& b, const Move& m) { return b.key < m; });
  if (it != kids_.end() && it->key == key) return &*it;
  if (!gen_) return nullptr;
  std::lock_guard<std::mutex> lock(mu_);
  auto [cit, inserted] = cache_.try_emplace(key);
  if (inserted) cit->second = gen_(key);
  return cit->second ? &*cit->second : nullptr;
}

CNodePtr make_cnode(Move h, std::string hb, std::vector<CBranch> kids,
                    CBranchGen gen, int arity) {
  return std::make_shared<CNode>(std::move(h), std::move(hb),
                                 std::move(kids), std::move(gen), arity);
}

namespace {

// (x•L)_x = 0, (y•L)_x = L_x + 1; L grows at the front.
long binder_index(const std::vector<std::string>& L, const std::string& x) {
  for (std::size_t i = 0; i < L.size(); ++i)
    if (L[i] == x) return static_cast<long>(i);
  throw ScopeError("unbound binder token: " + x);
}

StrategyPtr compile_node(const CNodePtr& n, std::vector<std::string> L) {
  Pointer k = n->hbind.empty() ? Pointer::free()
                               : Pointer::bound(binder_index(L, n->hbind));
  std::vector<Branch> kids;
  kids.reserve(n->kids().size());
  for (const CBranch& b : n->kids()) {
    auto L2 = L;
    L2.insert(L2.begin(), b.binder);
    kids.push_back(Branch{b.key, b.binders, compile_node(b.sub, L2)});
  }
  BranchGen gen;
  if (n->has_gen()) {
    CNodePtr src = n;
    gen = [src, L](const Move& key) -> std::optional<Branch> {
      const CBranch* b = src->child(key);
      if (!b) return std::nullopt;
      auto L2 = L;
      L2.insert(L2.begin(), b->binder);
      return Branch{b->key, b->binders, compile_node(b->sub, L2)};
    };
  }
  return make_node(n->head, k, std::move(kids), std::move(gen), n->arity);
}

struct TokenMint {
  std::string prefix;
  long next = 0;
  std::string fresh() { return prefix + std::to_string(next++); }
};

CNodePtr decompile_node(const StrategyPtr& n, std::vector<std::string> L,
                        const std::string& prefix,
                        const std::shared_ptr<TokenMint>& mint) {
  std::string hb;
  if (n->ptr.is_bound()) {
    if (n->ptr.off >= static_cast<long>(L.size()))
      throw PointerOutOfRange("decompile: pointer past the root");
    hb = L[static_cast<std::size_t>(n->ptr.off)];
  }
  std::vector<CBranch> kids;
  kids.reserve(n->kids().size());
  for (const Branch& b : n->kids()) {
    std::string tok = mint->fresh();
    auto L2 = L;
    L2.insert(L2.begin(), tok);
    kids.push_back(
        CBranch{b.key, tok, b.binders, decompile_node(b.sub, L2, prefix, mint)});
  }
  CBranchGen gen;
  if (n->has_gen()) {
    StrategyPtr src = n;
    std::string pfx = prefix;
    gen = [src, L, pfx, mint](const Move& key) -> std::optional<CBranch> {
      const Branch* b = src->child(key);
      if (!b) return std::nullopt;
      // Generated binders stay unique by deriving from the branch key.
      std::string tok = pfx + "'" + key.str();
      auto L2 = L;
      L2.insert(L2.begin(), tok);
      return CBranch{b->key, tok, b->binders,
                     decompile_node(b->sub, L2, pfx, mint)};
    };
  }
  return make_cnode(n->player, hb, std::move(kids), std::move(gen), n->arity);
}

}  // namespace

Rooted compile_concrete(const CTree& m, const std::vector<std::string>& L) {
  auto L2 = L;
  L2.insert(L2.begin(), m.root_binder);
  return Rooted{compile_node(m.root, L2), m.root_binders};
}

CTree decompile(const Rooted& phi, const std::string& prefix) {
  auto mint = std::make_shared<TokenMint>();
  mint->prefix = prefix;
  std::string rb = mint->fresh();
  return CTree{rb, phi.root_binders,
               decompile_node(phi.tree, {rb}, prefix, mint)};
}

namespace {
bool cnode_equal(const CNodePtr& a, const CNodePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->head != b->head || a->hbind != b->hbind) return false;
  const auto& ka = a->kids();
  const auto& kb = b->kids();
  if (ka.size() != kb.size()) return false;
  for (std::size_t i = 0; i < ka.size(); ++i) {
    if (ka[i].key != kb[i].key || ka[i].binder != kb[i].binder) return false;
    if (!cnode_equal(ka[i].sub, kb[i].sub)) return false;
  }
  return true;
}

void cnode_render(const CNodePtr& n, std::ostringstream& out) {
  out << '[' << n->head.str() << '|'
      << (n->hbind.empty() ? "_" : n->hbind) << ']';
  out << '{';
  bool first = true;
  for (const CBranch& b : n->kids()) {
    if (!first) out << ',';
    first = false;
    out << '(' << b.key.str() << ",(λ" << b.binder << '.';
    cnode_render(b.sub, out);
    out << "))";
  }
  if (n->has_gen()) out << (first ? "..." : ",...");
  out << '}';
}
}  // namespace

bool ctree_equal(const CTree& a, const CTree& b) {
  return a.root_binder == b.root_binder && cnode_equal(a.root, b.root);
}

std::string ctree_str(const CTree& m) {
  std::ostringstream out;
  out << "(λ" << m.root_binder << '.';
  cnode_render(m.root, out);
  out << ')';
  return out.str();
}

}  // namespace abt
