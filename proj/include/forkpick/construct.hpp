#pragma once

#include <string>
#include <vector>

#include "forkpick/display.hpp"
#include "forkpick/forkops.hpp"
#include "forkpick/netcheck.hpp"

namespace forkpick {

struct InsertionStep {
  std::string leaf;
  int kind = 0;
  std::vector<std::string> attached_to;  // leaves whose pendant edges were subdivided
  bool reticulation = false;
};

struct ConstructionTrace {
  std::string start_leaf;
  std::vector<InsertionStep> steps;  // in insertion order (reverse of the sequence)
  PhyloNetwork network;
  TemporalLabelling times;
  MapPair maps;
};

// Re-inserts the leaves of `seq` in reverse order, starting from its final
// leaf. Throws InputError for an invalid sequence and ConstructionError when
// a self-check on the result fails.
ConstructionTrace build_network(const PhyloTree& t1, const PhyloTree& t2, const ForkPickingSequence& seq,
                                const SpecialOptions& options = {});

// Replays the steps of a trace from its start leaf.
PhyloNetwork replay(const ConstructionTrace& trace);

}  // namespace forkpick
