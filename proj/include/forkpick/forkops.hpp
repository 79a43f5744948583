#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "forkpick/model.hpp"

namespace forkpick {

// A fork operation on leaf `leaf`, with the leaf tuples it matched in each tree:
//   kind 0: w1 = w2 = [x,y]           common cherry {x,y}
//   kind 1: w1 = [x,p], w2 = [x,q]    cherries {x,p} and {x,q}, p != q
//   kind 2: fork side [p,x,y]         3-fork (p,(x,y)); other side [x,p]
//   kind 3: fork side [y,x,p,q]       4-fork ((y,x),(p,q)); other side [x,p]
struct ForkOp {
  int kind = 0;
  std::string leaf;
  std::vector<std::string> w1;
  std::vector<std::string> w2;

  // 1 or 2 for kinds 2 and 3 (the tree holding the fork), otherwise 0.
  int fork_side() const;

  friend auto operator<=>(const ForkOp&, const ForkOp&) = default;
};

struct Verdict {
  bool ok = true;
  std::string reason;

  static Verdict pass() { return {}; }
  static Verdict fail(std::string why) { return {false, std::move(why)}; }
  explicit operator bool() const { return ok; }
};

// Where lca(x_{l-1}, x_l) is evaluated for the special-sequence lca condition.
enum class LcaTree { restriction, full };

// nested: every earlier leaf of the sequence lies below lca(x_{l-1}, x_l) in
// the fork tree. relaxed: no lca condition.
enum class LcaRule { nested, relaxed };

struct SpecialOptions {
  LcaTree lca_tree = LcaTree::restriction;
  LcaRule lca_rule = LcaRule::nested;
};

struct Block {
  bool special = false;
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  friend bool operator==(const Block&, const Block&) = default;
};

// Blocks alternate C_1, S_1, ..., C_k, S_k, C_{k+1}; C blocks may be empty.
struct ForkPickingSequence {
  std::vector<ForkOp> ops;
  std::vector<Block> blocks;

  std::size_t weight() const { return blocks.size() / 2; }
};

// Leaves x_1..x_{n-1} in removal order (the last leaf is implicit) and one bit
// per step: 1 iff the cherries containing x_i differ in the two restrictions.
struct CherryPickingSequence {
  std::vector<std::string> order;
  std::vector<int> counts;

  std::size_t ones() const;
  friend bool operator==(const CherryPickingSequence&, const CherryPickingSequence&) = default;
};

// Every operation applicable to the pair, sorted by (kind, leaf, w1, w2).
std::vector<ForkOp> applicable_ops(const PhyloTree& t1, const PhyloTree& t2);

// Removes op.leaf from both trees. Throws InputError if `op` does not match.
std::pair<PhyloTree, PhyloTree> apply_op(const PhyloTree& t1, const PhyloTree& t2, const ForkOp& op);

Verdict check_special_sequence(const PhyloTree& t1, const PhyloTree& t2, std::span<const ForkOp> ops,
                               const SpecialOptions& options = {});

// The unique block decomposition of an operation list, or none when some run
// of kind-2/3 operations is not closed by a kind-1 operation.
std::optional<std::vector<Block>> decompose(std::span<const ForkOp> ops);

// Attaches the decomposition; throws InputError when there is none.
ForkPickingSequence make_fork_picking_sequence(std::vector<ForkOp> ops);

Verdict check_fork_picking_sequence(const PhyloTree& t1, const PhyloTree& t2, const ForkPickingSequence& seq,
                                    const SpecialOptions& options = {});

Verdict check_cherry_picking_sequence(const PhyloTree& t1, const PhyloTree& t2, const CherryPickingSequence& cps);

CherryPickingSequence fork_to_cherry(const ForkPickingSequence& seq);

// Throws InputError when `cps` is not valid for the pair.
ForkPickingSequence cherry_to_fork(const PhyloTree& t1, const PhyloTree& t2, const CherryPickingSequence& cps);

}  // namespace forkpick
