#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "forkpick/detail/indexed_tree.hpp"
#include "forkpick/forkops.hpp"

namespace forkpick::detail {

// ForkOp with taxa replaced by indices into the sorted taxon list.
struct RawOp {
  int kind = 0;
  int x = -1;
  int side = -1;  // 0 or 1 for kinds 2 and 3: which tree holds the fork
  std::array<int, 4> w1{-1, -1, -1, -1};
  std::array<int, 4> w2{-1, -1, -1, -1};
  int n1 = 0;
  int n2 = 0;

  const std::array<int, 4>& fork() const { return side == 0 ? w1 : w2; }
  const std::array<int, 4>& other() const { return side == 0 ? w2 : w1; }

  friend bool operator==(const RawOp&, const RawOp&) = default;
};

bool raw_less(const RawOp& a, const RawOp& b);

class PairContext {
 public:
  PairContext(const PhyloTree& t1, const PhyloTree& t2);

  const std::vector<std::string>& taxa() const { return taxa_; }
  int size() const { return static_cast<int>(taxa_.size()); }
  Mask full() const { return full_; }
  const IndexedTree& tree(int side) const { return trees_[side]; }

  struct Views {
    IndexedTree::View v[2];
  };
  Views views(Mask m) const { return {{trees_[0].view(m), trees_[1].view(m)}}; }

  // All applicable operations on the restriction to `m`, sorted.
  std::vector<RawOp> ops(const Views& views, Mask m) const;
  // Only kind-0 operations.
  std::vector<RawOp> common_cherry_ops(const Views& views, Mask m) const;

  ForkOp to_public(const RawOp& op) const;
  // None when a label is unknown or the witness shape is wrong for the kind.
  std::optional<RawOp> to_raw(const ForkOp& op) const;
  int index_of(const std::string& label) const;  // -1 if unknown

 private:
  std::vector<std::string> taxa_;
  std::vector<IndexedTree> trees_;
  Mask full_ = 0;
};

}  // namespace forkpick::detail
