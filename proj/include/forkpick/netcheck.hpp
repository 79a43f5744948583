#pragma once

#include <optional>
#include <string>
#include <vector>

#include "forkpick/model.hpp"

namespace forkpick {

struct ClassReport {
  bool is_valid_network = false;
  bool is_tree_child = false;
  bool has_shortcut = false;
  bool is_normal = false;
  bool is_temporal = false;
  std::optional<std::string> witness;  // first violation found
};

// Integer times indexed by vertex id.
using TemporalLabelling = std::vector<int>;

ClassReport validate(const PhyloNetwork& net);

bool is_tree_child(const PhyloNetwork& net);
bool has_shortcut(const PhyloNetwork& net);

// Longest-path levels of the quotient DAG obtained by merging every
// reticulation with its parents; none iff no temporal labelling exists.
std::optional<TemporalLabelling> temporal_labelling(const PhyloNetwork& net);

bool is_temporal_labelling(const PhyloNetwork& net, const TemporalLabelling& times);

inline bool is_temporal_tree_child(const PhyloNetwork& net) {
  return is_tree_child(net) && temporal_labelling(net).has_value();
}

}  // namespace forkpick
