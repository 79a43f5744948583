#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "forkpick/construct.hpp"
#include "forkpick/display.hpp"
#include "forkpick/errors.hpp"
#include "forkpick/forkops.hpp"
#include "forkpick/model.hpp"
#include "forkpick/netcheck.hpp"
#include "forkpick/newick.hpp"
#include "forkpick/oracle.hpp"
#include "forkpick/search.hpp"

#ifndef FORKPICK_DATA_DIR
#define FORKPICK_DATA_DIR "data"
#endif

namespace forkpick::testing {

inline std::string data_path(const std::string& name) { return std::string(FORKPICK_DATA_DIR) + "/" + name; }
inline PhyloTree data_tree(const std::string& name) { return parse_tree(read_text_file(data_path(name))); }
inline PhyloNetwork data_net(const std::string& name) { return parse_network(read_text_file(data_path(name))); }

// First operation list whose (kind, leaf) entries follow `pattern` and which
// validates under `opts`.
inline std::optional<ForkPickingSequence> find_sequence(const PhyloTree& t1, const PhyloTree& t2,
                                                        const std::vector<std::pair<int, std::string>>& pattern,
                                                        const SpecialOptions& opts) {
  std::vector<ForkOp> ops;
  std::optional<ForkPickingSequence> found;
  std::function<bool(const PhyloTree&, const PhyloTree&)> rec = [&](const PhyloTree& a, const PhyloTree& b) {
    if (ops.size() == pattern.size()) {
      if (!decompose(ops)) return false;
      auto seq = make_fork_picking_sequence(ops);
      if (!check_fork_picking_sequence(t1, t2, seq, opts)) return false;
      found = std::move(seq);
      return true;
    }
    const auto& [kind, leaf] = pattern[ops.size()];
    for (const auto& op : applicable_ops(a, b)) {
      if (op.kind != kind || op.leaf != leaf) continue;
      ops.push_back(op);
      const auto [a2, b2] = apply_op(a, b, op);
      if (rec(a2, b2)) return true;
      ops.pop_back();
    }
    return false;
  };
  rec(t1, t2);
  return found;
}

// Every tree with at least three leaves has a pendant 3-fork or 4-fork.
inline bool has_small_fork(const PhyloTree& t) {
  for (VertexId v : t.postorder()) {
    if (t.is_leaf(v)) continue;
    const auto size = t.cluster(v).size();
    if (size == 3) return true;
    if (size == 4) {
      const auto [l, r] = t.children(v);
      if (t.cluster(l).size() == 2 && t.cluster(r).size() == 2) return true;
    }
  }
  return false;
}

// psi(root) is the network root.
inline bool root_maps_to_root(const PhyloTree& t, const PhyloNetwork& net, const DisplayMap& dm) {
  return dm.vertex_image.at(t.root()) == net.root();
}

// If the image of (u,v) passes through a reticulation w, psi(u) is a parent of w.
inline bool paths_enter_reticulations_directly(const PhyloTree& t, const PhyloNetwork& net, const DisplayMap& dm) {
  for (VertexId v = 0; v < static_cast<VertexId>(t.vertex_count()); ++v) {
    if (v == t.root()) continue;
    const auto& path = dm.edge_image.at(v);
    const VertexId start = dm.vertex_image.at(t.parent(v));
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      const VertexId w = path[i];
      if (net.role(w) != VertexRole::reticulation) continue;
      const auto& ps = net.parents(w);
      if (std::find(ps.begin(), ps.end(), start) == ps.end()) return false;
    }
  }
  return true;
}

// gamma in [lo, hi] at every non-root vertex.
inline bool gamma_within(const PhyloNetwork& net, const GammaProfile& g, int lo, int hi) {
  for (VertexId v = 0; v < static_cast<VertexId>(net.vertex_count()); ++v) {
    if (v == net.root()) continue;
    if (g[v] < lo || g[v] > hi) return false;
  }
  return true;
}

// A tree vertex with gamma 2 whose child roots a pendant subtree: that
// subtree is pendant in both trees.
inline bool pendant_subtrees_shared(const PhyloNetwork& net, const PhyloTree& t1, const PhyloTree& t2,
                                    const GammaProfile& g) {
  for (const auto& sub : pendant_subnetworks(net)) {
    if (!sub.is_tree) continue;
    const auto& ps = net.parents(sub.cut);
    if (ps.size() != 1) continue;
    const VertexId v = ps[0];
    if (net.role(v) != VertexRole::tree || g[v] != 2) continue;
    const auto tree = sub.network.as_tree();
    if (!tree) return false;
    if (!has_pendant_subtree(t1, *tree) || !has_pendant_subtree(t2, *tree)) return false;
  }
  return true;
}

// All checks on a rigid witness pair in a temporal tree-child network.
// Returns an empty string when everything holds.
inline std::string rigid_witness_violation(const PhyloNetwork& net, const PhyloTree& t1, const PhyloTree& t2,
                                           const MapPair& maps) {
  const auto& [a, b] = maps;
  if (!check_display_map(t1, net, a) || !check_display_map(t2, net, b)) return "invalid display map";
  if (!is_rigid_pair(net, a, b)) return "not a rigid pair";
  if (!root_maps_to_root(t1, net, a) || !root_maps_to_root(t2, net, b)) return "root image";
  const auto g = gamma_profile(net, a, b);
  if (!gamma_within(net, g, 2, 3)) return "gamma outside [2,3]";
  if (!paths_enter_reticulations_directly(t1, net, a) || !paths_enter_reticulations_directly(t2, net, b))
    return "edge image enters a reticulation from a non-parent";
  if (!isomorphic(t1, t2) && !pendant_subtrees_shared(net, t1, t2, g)) return "pendant subtree not shared";
  return {};
}

// The three clauses of the gamma characterisation of display, which must
// agree on temporal tree-child networks.
struct DisplayClauses {
  bool both_displayed = false;
  bool two_at_reticulations = false;
  bool two_off_root = false;
};

inline DisplayClauses display_clauses(const PhyloNetwork& net, const PhyloTree& t1, const PhyloTree& t2) {
  DisplayClauses c;
  c.both_displayed = displays(t1, net) && displays(t2, net);
  const std::vector<const PhyloTree*> trees{&t1, &t2};
  std::vector<int> caps(net.vertex_count(), kNoCap);
  for (VertexId r : net.reticulations()) caps[r] = 2;
  enumerate_display_maps(trees, net, caps, [&](std::span<const DisplayMap> maps) {
    const auto g = gamma_profile(net, maps[0], maps[1]);
    bool at_ret = true;
    for (VertexId r : net.reticulations()) at_ret = at_ret && g[r] == 2;
    if (at_ret) c.two_at_reticulations = true;
    if (gamma_within(net, g, 2, 2)) c.two_off_root = true;
    return !(c.two_at_reticulations && c.two_off_root);
  });
  return c;
}

}  // namespace forkpick::testing
