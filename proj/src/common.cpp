#include "abt/machines/common.hpp"

#include <deque>
#include <sstream>

namespace abt {

std::string Termination::str() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::answer:
      out << "answer " << move.str() << " at " << at.str();
      break;
    case Kind::free_answer:
      out << "free-answer " << move.str() << " at " << at.str();
      break;
    case Kind::blocked: {
      out << "blocked at " << at.str() << " (query";
      for (const Move& m : blocked_query) out << ' ' << m.str();
      out << ')';
      break;
    }
    case Kind::fuel:
      out << "fuel-exhausted at " << at.str();
      break;
  }
  return out.str();
}

long GamRun::max_stamp() const {
  long m = 0;
  for (const auto& it : items)
    if (!it.stage.star) m = std::max(m, it.stage.n);
  return m;
}

// ---------------------------------------------------------------------
// Arena

struct Arena::Mut {
  Move player;
  Pointer ptr;
  int arity = -1;
  int eta_level = 0;
  struct MB {
    Move key;
    int binders = -1;
    std::unique_ptr<Mut> sub;
  };
  std::vector<MB> kids;
  StrategyPtr src;  // kept for generator-backed children

  Mut* child(const Move& key) {
    for (auto& b : kids)
      if (b.key == key) return b.sub.get();
    if (src) {
      const Branch* b = src->child(key);
      if (b) {
        kids.push_back(MB{b->key, b->binders, clone(b->sub)});
        return kids.back().sub.get();
      }
    }
    return nullptr;
  }
  const MB* branch_of(const Move& key) const {
    for (auto& b : kids)
      if (b.key == key) return &b;
    return nullptr;
  }

  static std::unique_ptr<Mut> clone(const StrategyPtr& n) {
    auto m = std::make_unique<Mut>();
    m->player = n->player;
    m->ptr = n->ptr;
    m->arity = n->arity;
    m->src = n;
    for (const Branch& b : n->kids())
      m->kids.push_back(MB{b.key, b.binders, clone(b.sub)});
    return m;
  }

  void render(std::ostringstream& out, int indent) const {
    out << std::string(static_cast<std::size_t>(indent) * 2, ' ') << '['
        << player.str() << '|' << ptr.str() << ']';
    if (arity >= 0) out << '^' << arity;
    if (eta_level == 1) out << " ~eta";
    if (eta_level > 1) out << " ~" << eta_level << "eta";
    out << '\n';
    for (const auto& b : kids) {
      out << std::string(static_cast<std::size_t>(indent) * 2 + 2, ' ')
          << '<' << b.key.str() << '>';
      if (b.binders >= 0) out << '^' << b.binders;
      out << '\n';
      b.sub->render(out, indent + 2);
    }
  }
};

Arena::Arena(Rooted phi, CounterStrategy psi, EtaMode eta)
    : phi_(std::move(phi)), psi_(std::move(psi)), eta_(eta) {
  if (eta_ == EtaMode::on && phi_.tree) mphi_ = Mut::clone(phi_.tree);
}

Arena::~Arena() = default;

Arena::Mut* Arena::mut_root(const Move& name) {
  if (name.is_bullet()) return mphi_.get();
  auto it = mpsi_.find(name);
  if (it != mpsi_.end()) return it->second.get();
  const Rooted* e = psi_.entry(name);
  if (!e) return nullptr;
  auto [nit, _] = mpsi_.emplace(name, Mut::clone(e->tree));
  return nit->second.get();
}

bool Arena::hooked(const Move& name) const { return psi_.has(name); }

std::optional<Arena::Answer> Arena::answer(const std::vector<Move>& path) {
  if (path.empty()) throw MalformedState("empty query path");
  if (eta_ != EtaMode::on) {
    const Strategy* node = nullptr;
    if (path[0].is_bullet()) {
      node = walk(phi_, path);
    } else {
      const Rooted* e = psi_.entry(path[0]);
      if (e) node = walk(*e, path);
    }
    if (!node) return std::nullopt;
    return Answer{node->player, node->ptr, 0};
  }

  Mut* node = mut_root(path[0]);
  if (!node) return std::nullopt;
  int in_binders =
      path[0].is_bullet() ? phi_.root_binders
                          : psi_.entry(path[0])->root_binders;
  for (std::size_t i = 1; i < path.size(); ++i) {
    Mut* next = node->child(path[i]);
    if (next) {
      in_binders = node->branch_of(path[i])->binders;
      node = next;
      continue;
    }
    if (i + 1 != path.size()) return std::nullopt;
    // η rules: numeral query past the arity, or the degenerate case of
    // arbitrary moves when both superscripts vanish (copy-cat).
    const Move& m = path[i];
    long n1 = in_binders, n2 = node->arity;
    Move am;
    if (m.is_numeral()) {
      if (n1 < 0 || n2 < 0)
        throw MalformedState("η rules need an arity-annotated strategy");
      if (m.numeral_value() <= n2) return std::nullopt;
      am = Move::numeral(m.numeral_value() - n2 + n1);
    } else {
      if (n1 != 0 || n2 != 0) return std::nullopt;
      am = m;
    }
    auto sub = std::make_unique<Mut>();
    sub->player = am;
    sub->ptr = Pointer::bound(1);
    sub->arity = 0;
    sub->eta_level = node->eta_level + 1;
    node->kids.push_back(Mut::MB{m, 0, std::move(sub)});
    Mut* created = node->kids.back().sub.get();
    return Answer{created->player, created->ptr, created->eta_level};
  }
  return Answer{node->player, node->ptr, node->eta_level};
}

std::vector<Move> Arena::branch_keys(const std::vector<Move>& path) {
  std::vector<Move> keys;
  if (eta_ == EtaMode::on) {
    Mut* node = mut_root(path[0]);
    for (std::size_t i = 1; node && i < path.size(); ++i)
      node = node->child(path[i]);
    if (node)
      for (auto& b : node->kids) keys.push_back(b.key);
    return keys;
  }
  const Strategy* node = nullptr;
  if (path[0].is_bullet()) {
    node = walk(phi_, path);
  } else if (const Rooted* e = psi_.entry(path[0])) {
    node = walk(*e, path);
  }
  if (node)
    for (const Branch& b : node->kids()) keys.push_back(b.key);
  return keys;
}

std::string Arena::render_expanded() const {
  std::ostringstream out;
  if (mphi_) {
    out << "phi:\n";
    mphi_->render(out, 1);
  }
  for (const auto& [name, root] : mpsi_) {
    out << "psi " << name.str() << ":\n";
    root->render(out, 1);
  }
  return out.str();
}

// ---------------------------------------------------------------------
// Multiplexed trees

namespace {
struct TNode {
  Move move;
  long stamp = 0;
  bool answered = false;
  Move amove;
  Pointer aptr;
  int eta = 0;
  std::vector<TNode*> kids;
};

MNode freeze(const TNode* t) {
  MNode n;
  n.move = t->move;
  n.stamp = t->stamp;
  n.answered = t->answered;
  n.amove = t->amove;
  n.aptr = t->aptr;
  n.eta_level = t->eta;
  for (const TNode* k : t->kids) n.kids.push_back(freeze(k));
  return n;
}
}  // namespace

MTrees build_mtrees_upto(const std::vector<GamItem>& items, Stage cutoff) {
  std::deque<TNode> arena;
  std::map<long, TNode*> by_stamp;
  std::map<Move, std::vector<TNode*>> roots;
  for (const GamItem& it : items) {
    if (cutoff < it.stage) break;
    const Seat* last = it.pos.get();
    if (!it.stage.star) {
      arena.emplace_back();
      TNode* node = &arena.back();
      node->move = last->move;
      node->stamp = last->stamp;
      by_stamp[last->stamp] = node;
      const Seat* parent =
          last->prev ? last->prev->prev.get() : nullptr;
      if (parent) {
        by_stamp.at(parent->stamp)->kids.push_back(node);
      } else {
        roots[last->move].push_back(node);
      }
    } else {
      const Seat* q = last->prev.get();
      TNode* node = by_stamp.at(q->stamp);
      node->answered = true;
      node->amove = last->move;
      node->aptr = last->ptr;
      node->eta = it.eta_level;
    }
  }
  MTrees out;
  for (auto& [mv, ns] : roots)
    for (TNode* n : ns) out.roots[mv].push_back(freeze(n));
  return out;
}

MTrees build_mtrees(const std::vector<GamItem>& items) {
  return build_mtrees_upto(
      items, items.empty() ? Stage::plain(1) : items.back().stage);
}

namespace {
bool mnode_equal(const MNode& a, const MNode& b, bool eta) {
  if (a.move != b.move || a.stamp != b.stamp || a.answered != b.answered)
    return false;
  if (a.answered && (a.amove != b.amove || a.aptr != b.aptr)) return false;
  if (eta && a.eta_level != b.eta_level) return false;
  if (a.kids.size() != b.kids.size()) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!mnode_equal(a.kids[i], b.kids[i], eta)) return false;
  return true;
}

void render_mnode(std::ostringstream& out, const MNode& n, int indent) {
  out << std::string(static_cast<std::size_t>(indent) * 2, ' ');
  out << '<' << n.move.str() << '@' << n.stamp << '>';
  if (n.answered) {
    out << " [" << n.amove.str() << '|' << n.aptr.str() << ']';
    if (n.eta_level == 1) out << "^η";
    if (n.eta_level > 1) out << '^' << n.eta_level << "η";
  }
  out << '\n';
  for (const MNode& k : n.kids) render_mnode(out, k, indent + 1);
}

void collect_stamps(const MNode& n, std::vector<long>& out) {
  out.push_back(n.stamp);
  for (const MNode& k : n.kids) collect_stamps(k, out);
}
}  // namespace

bool mtrees_equal(const MTrees& a, const MTrees& b, bool compare_eta) {
  if (a.roots.size() != b.roots.size()) return false;
  for (auto ia = a.roots.begin(), ib = b.roots.begin(); ia != a.roots.end();
       ++ia, ++ib) {
    if (ia->first != ib->first) return false;
    if (ia->second.size() != ib->second.size()) return false;
    for (std::size_t i = 0; i < ia->second.size(); ++i)
      if (!mnode_equal(ia->second[i], ib->second[i], compare_eta))
        return false;
  }
  return true;
}

std::string render_mtrees(const MTrees& t) {
  std::ostringstream out;
  for (const auto& [mv, roots] : t.roots) {
    if (mv.is_bullet())
      out << "phi:\n";
    else
      out << "psi " << mv.str() << ":\n";
    for (const MNode& r : roots) render_mnode(out, r, 1);
  }
  return out.str();
}

std::vector<long> opp_stamps(const MTrees& t, const Move& root) {
  std::vector<long> out;
  auto it = t.roots.find(root);
  if (it == t.roots.end()) return out;
  for (const MNode& r : it->second) collect_stamps(r, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::string render_trace(const GamRun& run) {
  std::ostringstream out;
  for (const GamItem& it : run.items) {
    std::string stage = it.stage.str();
    out << stage << std::string(stage.size() < 5 ? 5 - stage.size() : 1, ' ')
        << it.rule;
    out << std::string(it.rule.size() < 10 ? 10 - it.rule.size() : 1, ' ');
    out << pos_str(it.pos) << '\n';
  }
  out << "halt: " << run.term.str() << '\n';
  return out.str();
}

}  // namespace abt
