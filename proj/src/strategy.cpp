#include "abt/strategy.hpp"

#include <algorithm>

namespace abt {

namespace {
void sort_branches(std::vector<Branch>& kids) {
  std::sort(kids.begin(), kids.end(),
            [](const Branch& a, const Branch& b) { return a.key < b.key; });
}
}  // namespace

Strategy::Strategy(Move p, Pointer k, std::vector<Branch> kids,
                   BranchGen gen, int arity)
    : player(std::move(p)),
      ptr(k),
      arity(arity),
      kids_(std::move(kids)),
      gen_(std::move(gen)) {
  sort_branches(kids_);
}

const Branch* Strategy::child(const Move& key) const {
  auto it = std::lower_bound(
      kids_.begin(), kids_.end(), key,
      [](const Branch& b, const Move& m) { return b.key < m; });
  if (it != kids_.end() && it->key == key) return &*it;
  if (!gen_) return nullptr;
  std::lock_guard<std::mutex> lock(mu_);
  auto [cit, inserted] = cache_.try_emplace(key);
  if (inserted) cit->second = gen_(key);
  return cit->second ? &*cit->second : nullptr;
}

StrategyPtr make_node(Move p, Pointer k, std::vector<Branch> kids,
                      BranchGen gen, int arity) {
  return std::make_shared<Strategy>(std::move(p), k, std::move(kids),
                                    std::move(gen), arity);
}

const Rooted* CounterStrategy::entry(const Move& name) const {
  auto it = entries.find(name);
  if (it != entries.end()) return &it->second;
  if (!gen) return nullptr;
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto [cit, inserted] = cache_->memo.try_emplace(name);
  if (inserted) cit->second = gen(name);
  return cit->second ? &*cit->second : nullptr;
}

const Strategy* walk(const Rooted& root, const std::vector<Move>& path) {
  if (path.empty() || !root.tree) return nullptr;
  const Strategy* node = root.tree.get();
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Branch* b = node->child(path[i]);
    if (!b) return nullptr;
    node = b->sub.get();
  }
  return node;
}

std::optional<std::pair<Move, Pointer>> lookup(const Rooted& phi, Pos q) {
  if (!pos_is_query(q)) throw MalformedState("lookup on a non-query");
  const Strategy* node = walk(phi, opp_path(q));
  if (!node) return std::nullopt;
  return std::make_pair(node->player, node->ptr);
}

bool tree_equal(const StrategyPtr& a, const StrategyPtr& b,
                bool compare_annotations) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->player != b->player || a->ptr != b->ptr) return false;
  if (compare_annotations && a->arity != b->arity) return false;
  const auto& ka = a->kids();
  const auto& kb = b->kids();
  if (ka.size() != kb.size()) return false;
  for (std::size_t i = 0; i < ka.size(); ++i) {
    if (ka[i].key != kb[i].key) return false;
    if (compare_annotations && ka[i].binders != kb[i].binders) return false;
    if (!tree_equal(ka[i].sub, kb[i].sub, compare_annotations)) return false;
  }
  return true;
}

namespace {
bool pointers_valid_rec(const StrategyPtr& n, long height) {
  // height = number of opponent blocks above this node's player move.
  if (n->ptr.is_bound() && n->ptr.off >= height) return false;
  for (const Branch& b : n->kids())
    if (!pointers_valid_rec(b.sub, height + 1)) return false;
  return true;
}
}  // namespace

bool pointers_valid(const Rooted& r) {
  return r.tree && pointers_valid_rec(r.tree, 1);
}

}  // namespace abt
