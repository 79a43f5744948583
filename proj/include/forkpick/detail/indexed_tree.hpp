#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "forkpick/model.hpp"

namespace forkpick::detail {

using Mask = std::uint64_t;

inline constexpr int kMaxTaxa = 62;

inline Mask bit(int i) { return Mask{1} << i; }
inline int popcount(Mask m) { return __builtin_popcountll(m); }

// A tree whose leaves are numbered by their position in a fixed sorted taxon
// list, so that restrictions can be addressed by bitmask.
class IndexedTree {
 public:
  IndexedTree(const PhyloTree& tree, const std::vector<std::string>& taxa);

  const PhyloTree& tree() const { return tree_; }
  int taxon_count() const { return static_cast<int>(leaf_vertex_.size()); }
  VertexId leaf_vertex(int taxon) const { return leaf_vertex_[taxon]; }
  int taxon_of(VertexId v) const { return taxon_of_[v]; }

  // The restriction to a leaf subset, expressed on the original vertex ids.
  class View {
   public:
    // Taxon forming a cherry with x, or -1.
    int partner(int x) const;
    // (p, y) such that (p,(x,y)) is a pendant 3-fork, or {-1,-1}.
    std::array<int, 2> three_fork(int x) const;
    // (y, a, b) such that ((y,x),(a,b)) is a pendant 4-fork, or {-1,-1,-1}.
    std::array<int, 3> four_fork(int x) const;
    // The restricted vertex at the lca of the given taxa (all in the subset).
    VertexId lca(Mask taxa) const;
    // Taxa below the restricted vertex `v`.
    Mask cluster(VertexId v) const { return below_[v]; }
    VertexId root() const { return root_; }
    VertexId parent(VertexId v) const { return rparent_[v]; }
    std::array<VertexId, 2> children(VertexId v) const;
    bool is_leaf(VertexId v) const { return owner_->tree_.is_leaf(v); }

   private:
    friend class IndexedTree;
    // Sibling of the restricted vertex v in the restricted tree.
    VertexId sibling(VertexId v) const;

    const IndexedTree* owner_ = nullptr;
    std::vector<VertexId> rep_;      // restricted vertex representing each original vertex
    std::vector<VertexId> rparent_;  // restricted parent of each restricted vertex
    std::vector<Mask> below_;
    VertexId root_ = kNoVertex;
  };

  View view(Mask subset) const;

 private:
  PhyloTree tree_;
  std::vector<VertexId> leaf_vertex_;
  std::vector<int> taxon_of_;
  std::vector<VertexId> postorder_;
  std::vector<VertexId> preorder_;
};

}  // namespace forkpick::detail
