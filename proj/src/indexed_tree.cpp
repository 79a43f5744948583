#include "forkpick/detail/indexed_tree.hpp"

#include "forkpick/errors.hpp"

namespace forkpick::detail {

IndexedTree::IndexedTree(const PhyloTree& tree, const std::vector<std::string>& taxa)
    : tree_(tree), taxon_of_(tree.vertex_count(), -1) {
  if (taxa.size() > static_cast<std::size_t>(kMaxTaxa)) throw InputError("too many taxa for bitmask indexing");
  if (tree.leaf_labels() != taxa) throw InputError("tree leaf set does not match the taxon list");
  for (std::size_t i = 0; i < taxa.size(); ++i) {
    const VertexId v = tree.leaf_or_throw(taxa[i]);
    leaf_vertex_.push_back(v);
    taxon_of_[v] = static_cast<int>(i);
  }
  postorder_ = tree.postorder();
  preorder_ = tree.preorder();
}

IndexedTree::View IndexedTree::view(Mask subset) const {
  const std::size_t n = tree_.vertex_count();
  View w;
  w.owner_ = this;
  w.below_.assign(n, 0);
  w.rep_.assign(n, kNoVertex);
  w.rparent_.assign(n, kNoVertex);
  for (VertexId v : postorder_) {
    if (tree_.is_leaf(v)) {
      if (subset & bit(taxon_of_[v])) {
        w.below_[v] = bit(taxon_of_[v]);
        w.rep_[v] = v;
      }
      continue;
    }
    const auto [a, b] = tree_.children(v);
    w.below_[v] = w.below_[a] | w.below_[b];
    if (w.below_[a] && w.below_[b]) {
      w.rep_[v] = v;
    } else {
      w.rep_[v] = w.below_[a] ? w.rep_[a] : w.rep_[b];
    }
  }
  std::vector<VertexId> up(n, kNoVertex);
  for (VertexId v : preorder_) {
    if (tree_.is_leaf(v)) continue;
    const auto [a, b] = tree_.children(v);
    const bool branching = w.below_[a] && w.below_[b];
    up[a] = up[b] = branching ? v : up[v];
  }
  for (std::size_t v = 0; v < n; ++v)
    if (w.rep_[v] == static_cast<VertexId>(v)) w.rparent_[v] = up[v];
  w.root_ = w.rep_[tree_.root()];
  return w;
}

std::array<VertexId, 2> IndexedTree::View::children(VertexId v) const {
  const auto [a, b] = owner_->tree_.children(v);
  return {rep_[a], rep_[b]};
}

VertexId IndexedTree::View::sibling(VertexId v) const {
  const VertexId p = rparent_[v];
  if (p == kNoVertex) return kNoVertex;
  const auto ch = children(p);
  return ch[0] == v ? ch[1] : ch[0];
}

int IndexedTree::View::partner(int x) const {
  const VertexId s = sibling(owner_->leaf_vertex_[x]);
  if (s == kNoVertex || !is_leaf(s)) return -1;
  return owner_->taxon_of_[s];
}

std::array<int, 2> IndexedTree::View::three_fork(int x) const {
  const VertexId v = owner_->leaf_vertex_[x];
  const VertexId s = sibling(v);
  if (s == kNoVertex || !is_leaf(s)) return {-1, -1};
  const VertexId o = sibling(rparent_[v]);
  if (o == kNoVertex || !is_leaf(o)) return {-1, -1};
  return {owner_->taxon_of_[o], owner_->taxon_of_[s]};
}

std::array<int, 3> IndexedTree::View::four_fork(int x) const {
  const VertexId v = owner_->leaf_vertex_[x];
  const VertexId s = sibling(v);
  if (s == kNoVertex || !is_leaf(s)) return {-1, -1, -1};
  const VertexId o = sibling(rparent_[v]);
  if (o == kNoVertex || is_leaf(o)) return {-1, -1, -1};
  const auto [a, b] = children(o);
  if (!is_leaf(a) || !is_leaf(b)) return {-1, -1, -1};
  int ta = owner_->taxon_of_[a], tb = owner_->taxon_of_[b];
  if (tb < ta) std::swap(ta, tb);
  return {owner_->taxon_of_[s], ta, tb};
}

VertexId IndexedTree::View::lca(Mask taxa) const {
  VertexId v = root_;
  while (v != kNoVertex && !is_leaf(v)) {
    const auto [a, b] = children(v);
    if ((below_[a] & taxa) == taxa) {
      v = a;
    } else if ((below_[b] & taxa) == taxa) {
      v = b;
    } else {
      break;
    }
  }
  return v;
}

}  // namespace forkpick::detail
