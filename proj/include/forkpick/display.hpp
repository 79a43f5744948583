#pragma once

#include <climits>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "forkpick/model.hpp"

namespace forkpick {

// Vertex map plus explicit edge-image paths. Tree edges are identified by
// their head vertex, so edge_image[v] is the network path from
// vertex_image[parent(v)] to vertex_image[v] (empty for the root).
struct DisplayMap {
  std::vector<VertexId> vertex_image;
  std::vector<std::vector<VertexId>> edge_image;

  friend bool operator==(const DisplayMap&, const DisplayMap&) = default;
};

// Per network vertex: number of tree edges whose image ends at or passes
// through it.
using GammaProfile = std::vector<int>;

using MapPair = std::pair<DisplayMap, DisplayMap>;

inline constexpr int kNoCap = INT_MAX;

// Verifies (i) internal images are tree vertices or the root, (ii) every edge
// image is a directed path with at least one edge, (iii) sibling edge images
// leave through distinct first edges; leaves map to equally labelled leaves.
// Throws InputError when sizes or path endpoints do not match the vertex map.
bool check_display_map(const PhyloTree& tree, const PhyloNetwork& net, const DisplayMap& dm);

GammaProfile gamma_profile(const PhyloNetwork& net, const DisplayMap& dm);
GammaProfile gamma_profile(const PhyloNetwork& net, const DisplayMap& a, const DisplayMap& b);

// Polynomial bottom-up decision: does any display map exist?
bool weakly_displays(const PhyloTree& tree, const PhyloNetwork& net);

struct DisplayMapList {
  std::vector<DisplayMap> maps;
  bool truncated = false;  // more maps exist than `limit`
};

DisplayMapList find_display_maps(const PhyloTree& tree, const PhyloNetwork& net, std::size_t limit = 10000);

// Some subgraph of `net` is a subdivision of `tree`. Decided by trying every
// choice of one in-edge per reticulation.
bool displays(const PhyloTree& tree, const PhyloNetwork& net);

// A display map whose profile is at most 1 everywhere, if any. Such a map
// exists iff `net` displays `tree`.
std::optional<DisplayMap> find_disjoint_display_map(const PhyloTree& tree, const PhyloNetwork& net);

// Caps for rigid display: 3 at reticulations, 2 at parents of reticulations.
std::vector<int> rigid_caps(const PhyloNetwork& net);

bool is_rigid_pair(const PhyloNetwork& net, const DisplayMap& a, const DisplayMap& b);

std::optional<MapPair> rigidly_displays(const PhyloNetwork& net, const PhyloTree& t1, const PhyloTree& t2);

// Enumerates tuples of display maps (one per tree) whose summed profile
// respects `caps` (indexed by network vertex). The visitor returns false to
// stop. Returns false iff the visitor stopped the search.
using MapVisitor = std::function<bool(std::span<const DisplayMap>)>;
bool enumerate_display_maps(std::span<const PhyloTree* const> trees, const PhyloNetwork& net,
                            const std::vector<int>& caps, const MapVisitor& visit);

}  // namespace forkpick
