#pragma once

#include <string>

#include "forkpick/model.hpp"
#include "forkpick/netcheck.hpp"

namespace forkpick {

// Graphviz text. Reticulations are filled red; when the network is temporal
// every vertex carries its level and equal levels share a rank.
std::string to_dot(const PhyloNetwork& net);
std::string to_dot(const PhyloTree& tree);

}  // namespace forkpick
