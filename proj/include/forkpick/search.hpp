#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "forkpick/display.hpp"
#include "forkpick/forkops.hpp"
#include "forkpick/model.hpp"

namespace forkpick {

enum class SearchStatus { optimal, infeasible, unknown };

struct SearchStats {
  std::size_t nodes = 0;
  std::size_t memo_hits = 0;
  double elapsed_seconds = 0.0;
};

struct SearchOptions {
  std::size_t node_limit = 50'000'000;
  double time_limit_seconds = 0.0;  // 0 = none
  // Apply common-cherry operations greedily instead of branching on them.
  bool eager_common_cherries = true;
  SpecialOptions special;
};

// Default node limit, overridden by FORKPICK_NODE_LIMIT when set.
std::size_t default_node_limit();

struct ForkSearchResult {
  SearchStatus status = SearchStatus::unknown;
  int optimum = -1;
  std::optional<ForkPickingSequence> witness;
  SearchStats stats;
};

struct CherrySearchResult {
  SearchStatus status = SearchStatus::unknown;
  int optimum = -1;
  std::optional<CherryPickingSequence> witness;
  SearchStats stats;
};

// s_r: minimum weight of a fork-picking sequence.
ForkSearchResult min_weight_fork_picking(const PhyloTree& t1, const PhyloTree& t2, const SearchOptions& options = {});

// Minimum number of 1-counts over all cherry-picking sequences.
CherrySearchResult min_weight_cherry_picking(const PhyloTree& t1, const PhyloTree& t2,
                                             const SearchOptions& options = {});

bool decide_rigidly_displayable(const PhyloTree& t1, const PhyloTree& t2);

// Every special sequence available at the start of the pair, one per set of
// removed leaves (the lexicographically first such sequence).
std::vector<std::vector<ForkOp>> special_sequences(const PhyloTree& t1, const PhyloTree& t2,
                                                   const SpecialOptions& options = {});

// Sequence of weight <= h(net) read off a temporal tree-child network that
// rigidly displays both trees. Witness maps are recomputed when absent.
// Throws InputError when the preconditions fail.
ForkPickingSequence extract_fork_picking(const PhyloNetwork& net, const PhyloTree& t1, const PhyloTree& t2,
                                         const std::optional<MapPair>& witnesses = std::nullopt,
                                         const SpecialOptions& options = {});

}  // namespace forkpick
