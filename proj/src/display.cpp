#include "forkpick/display.hpp"

#include <algorithm>
#include <deque>

#include "forkpick/errors.hpp"

namespace forkpick {

namespace {

void require_same_leaves(const PhyloTree& tree, const PhyloNetwork& net) {
  if (tree.leaf_labels() != net.leaf_labels()) throw InputError("tree and network have different leaf sets");
}

bool can_host(const PhyloNetwork& net, VertexId x) {
  return net.outdegree(x) == 2 && net.indegree(x) <= 1;
}

// Where each tree vertex may be mapped, ignoring profile caps.
struct Feasibility {
  // feasible[u][x]: x can be psi(u) for some display map of the subtree at u.
  std::vector<std::vector<char>> feasible;
  // reach[u][x]: some vertex in feasible[u] is reachable from x (x included).
  std::vector<std::vector<char>> reach;
};

Feasibility compute_feasibility(const PhyloTree& tree, const PhyloNetwork& net, const std::vector<VertexId>& topo) {
  const std::size_t n = net.vertex_count();
  Feasibility f;
  f.feasible.assign(tree.vertex_count(), std::vector<char>(n, 0));
  f.reach.assign(tree.vertex_count(), std::vector<char>(n, 0));
  for (VertexId u : tree.postorder()) {
    auto& feas = f.feasible[u];
    if (tree.is_leaf(u)) {
      feas[*net.leaf(tree.label(u))] = 1;
    } else {
      const auto& ra = f.reach[tree.children(u)[0]];
      const auto& rb = f.reach[tree.children(u)[1]];
      for (std::size_t i = 0; i < n; ++i) {
        const auto x = static_cast<VertexId>(i);
        if (!can_host(net, x)) continue;
        const VertexId c1 = net.children(x)[0], c2 = net.children(x)[1];
        if (c1 == c2) continue;
        feas[i] = (ra[c1] && rb[c2]) || (ra[c2] && rb[c1]);
      }
    }
    auto& reach = f.reach[u];
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
      const VertexId x = *it;
      char r = feas[x];
      for (VertexId c : net.children(x)) r = r || reach[c];
      reach[x] = r;
    }
  }
  return f;
}

class MapSearch {
 public:
  MapSearch(std::span<const PhyloTree* const> trees, const PhyloNetwork& net, const std::vector<int>& caps,
            const MapVisitor& visit)
      : trees_(trees.begin(), trees.end()), net_(net), caps_(caps), visit_(visit) {
    auto topo = topological_order(net);
    if (!topo) throw InputError("network has a cycle");
    for (const PhyloTree* t : trees_) {
      require_same_leaves(*t, net);
      feas_.push_back(compute_feasibility(*t, net, *topo));
      DisplayMap dm;
      dm.vertex_image.assign(t->vertex_count(), kNoVertex);
      dm.edge_image.assign(t->vertex_count(), {});
      maps_.push_back(std::move(dm));
    }
    gamma_.assign(net.vertex_count(), 0);
    // Interleave the breadth-first edge orders of the trees.
    std::vector<std::vector<VertexId>> orders;
    for (const PhyloTree* t : trees_) {
      std::vector<VertexId> order;
      std::deque<VertexId> queue{t->root()};
      while (!queue.empty()) {
        const VertexId u = queue.front();
        queue.pop_front();
        if (u != t->root()) order.push_back(u);
        if (!t->is_leaf(u)) {
          queue.push_back(t->children(u)[0]);
          queue.push_back(t->children(u)[1]);
        }
      }
      orders.push_back(std::move(order));
    }
    for (std::size_t i = 0;; ++i) {
      bool any = false;
      for (std::size_t t = 0; t < orders.size(); ++t) {
        if (i < orders[t].size()) {
          steps_.push_back({t, orders[t][i]});
          any = true;
        }
      }
      if (!any) break;
    }
  }

  bool run() { return choose_root(0); }

 private:
  struct Step {
    std::size_t tree;
    VertexId head;
  };

  bool choose_root(std::size_t t) {
    if (t == trees_.size()) return place(0);
    const PhyloTree& tree = *trees_[t];
    const auto& feas = feas_[t].feasible[tree.root()];
    for (std::size_t x = 0; x < feas.size(); ++x) {
      if (!feas[x]) continue;
      maps_[t].vertex_image[tree.root()] = static_cast<VertexId>(x);
      if (!choose_root(t + 1)) return false;
    }
    maps_[t].vertex_image[tree.root()] = kNoVertex;
    return true;
  }

  bool place(std::size_t k) {
    if (k == steps_.size()) return visit_(std::span<const DisplayMap>(maps_));
    const auto [t, v] = steps_[k];
    const PhyloTree& tree = *trees_[t];
    const VertexId u = tree.parent(v);
    const VertexId s = tree.sibling(v);
    const VertexId start = maps_[t].vertex_image[u];
    const auto& sibling_path = maps_[t].edge_image[s];
    const auto& reach_v = feas_[t].reach[v];
    const auto& reach_s = feas_[t].reach[s];
    auto& path = maps_[t].edge_image[v];
    path.assign(1, start);
    for (VertexId c : net_.children(start)) {
      if (!reach_v[c]) continue;
      if (!sibling_path.empty()) {
        if (sibling_path[1] == c) continue;
      } else {
        // The sibling must still be able to leave through the other edge.
        bool ok = false;
        for (VertexId d : net_.children(start)) ok = ok || (d != c && reach_s[d]);
        if (!ok) continue;
      }
      if (!extend(k, c)) return false;
    }
    path.clear();
    return true;
  }

  // Appends x to the current step's path and tries to end there or go on.
  bool extend(std::size_t k, VertexId x) {
    const auto [t, v] = steps_[k];
    if (gamma_[x] >= caps_[x]) return true;
    ++gamma_[x];
    auto& dm = maps_[t];
    dm.edge_image[v].push_back(x);
    bool go_on = true;
    if (feas_[t].feasible[v][x]) {
      dm.vertex_image[v] = x;
      go_on = place(k + 1);
      dm.vertex_image[v] = kNoVertex;
    }
    if (go_on) {
      for (VertexId c : net_.children(x)) {
        if (!feas_[t].reach[v][c]) continue;
        if (!extend(k, c)) {
          go_on = false;
          break;
        }
      }
    }
    dm.edge_image[v].pop_back();
    --gamma_[x];
    return go_on;
  }

  std::vector<const PhyloTree*> trees_;
  const PhyloNetwork& net_;
  const std::vector<int>& caps_;
  const MapVisitor& visit_;
  std::vector<Feasibility> feas_;
  std::vector<DisplayMap> maps_;
  std::vector<int> gamma_;
  std::vector<Step> steps_;
};

}  // namespace

bool check_display_map(const PhyloTree& tree, const PhyloNetwork& net, const DisplayMap& dm) {
  require_same_leaves(tree, net);
  if (dm.vertex_image.size() != tree.vertex_count() || dm.edge_image.size() != tree.vertex_count())
    throw InputError("display map size does not match the tree");
  const auto n = static_cast<VertexId>(net.vertex_count());
  for (VertexId x : dm.vertex_image)
    if (x < 0 || x >= n) throw InputError("display map image out of range");
  for (std::size_t i = 0; i < tree.vertex_count(); ++i) {
    const auto v = static_cast<VertexId>(i);
    const auto& path = dm.edge_image[v];
    if (v == tree.root()) continue;
    if (path.empty() || path.front() != dm.vertex_image[tree.parent(v)] || path.back() != dm.vertex_image[v])
      throw InputError("edge image endpoints do not match the vertex images");
  }
  for (std::size_t i = 0; i < tree.vertex_count(); ++i) {
    const auto v = static_cast<VertexId>(i);
    const VertexId x = dm.vertex_image[v];
    if (tree.is_leaf(v)) {
      if (!net.children(x).empty() || net.label(x) != tree.label(v)) return false;
    } else if (!can_host(net, x)) {
      return false;
    }
    if (v == tree.root()) continue;
    const auto& path = dm.edge_image[v];
    if (path.size() < 2) return false;
    for (std::size_t j = 0; j + 1 < path.size(); ++j) {
      const auto& ch = net.children(path[j]);
      if (std::find(ch.begin(), ch.end(), path[j + 1]) == ch.end()) return false;
    }
    const VertexId s = tree.sibling(v);
    if (dm.edge_image[s].size() >= 2 && dm.edge_image[s][1] == path[1]) return false;
  }
  return true;
}

GammaProfile gamma_profile(const PhyloNetwork& net, const DisplayMap& dm) {
  GammaProfile g(net.vertex_count(), 0);
  for (const auto& path : dm.edge_image)
    for (std::size_t j = 1; j < path.size(); ++j) ++g[path[j]];
  return g;
}

GammaProfile gamma_profile(const PhyloNetwork& net, const DisplayMap& a, const DisplayMap& b) {
  auto g = gamma_profile(net, a);
  const auto h = gamma_profile(net, b);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += h[i];
  return g;
}

bool weakly_displays(const PhyloTree& tree, const PhyloNetwork& net) {
  require_same_leaves(tree, net);
  auto topo = topological_order(net);
  if (!topo) throw InputError("network has a cycle");
  const auto f = compute_feasibility(tree, net, *topo);
  const auto& r = f.feasible[tree.root()];
  return std::find(r.begin(), r.end(), 1) != r.end();
}

DisplayMapList find_display_maps(const PhyloTree& tree, const PhyloNetwork& net, std::size_t limit) {
  DisplayMapList out;
  const PhyloTree* trees[] = {&tree};
  std::vector<int> caps(net.vertex_count(), kNoCap);
  enumerate_display_maps(trees, net, caps, [&](std::span<const DisplayMap> maps) {
    if (out.maps.size() == limit) {
      out.truncated = true;
      return false;
    }
    out.maps.push_back(maps[0]);
    return true;
  });
  return out;
}

bool displays(const PhyloTree& tree, const PhyloNetwork& net) {
  require_same_leaves(tree, net);
  const auto target = canonical_form(tree);
  const auto rets = net.reticulations();
  if (rets.size() > 20) throw InputError("displays: too many reticulations for switching enumeration");
  for (std::uint32_t choice = 0; choice < (1u << rets.size()); ++choice) {
    PhyloNetwork g = net;
    for (std::size_t i = 0; i < rets.size(); ++i) {
      const auto& parents = net.parents(rets[i]);
      const std::size_t keep = (choice >> i) & 1u;
      if (keep >= parents.size()) goto next_choice;
      for (std::size_t j = 0; j < parents.size(); ++j)
        if (j != keep) g.remove_edge(parents[j], rets[i]);
    }
    {
      const auto reduced = remove_leaves(g, {});
      const auto t = reduced.as_tree();
      if (t && canonical_form(*t) == target) return true;
    }
  next_choice:;
  }
  return false;
}

std::optional<DisplayMap> find_disjoint_display_map(const PhyloTree& tree, const PhyloNetwork& net) {
  std::optional<DisplayMap> found;
  const PhyloTree* trees[] = {&tree};
  std::vector<int> caps(net.vertex_count(), 1);
  enumerate_display_maps(trees, net, caps, [&](std::span<const DisplayMap> maps) {
    found = maps[0];
    return false;
  });
  return found;
}

std::vector<int> rigid_caps(const PhyloNetwork& net) {
  std::vector<int> caps(net.vertex_count(), kNoCap);
  for (VertexId r : net.reticulations()) {
    caps[r] = std::min(caps[r], 3);
    for (VertexId p : net.parents(r)) caps[p] = std::min(caps[p], 2);
  }
  return caps;
}

bool is_rigid_pair(const PhyloNetwork& net, const DisplayMap& a, const DisplayMap& b) {
  const auto g = gamma_profile(net, a, b);
  const auto caps = rigid_caps(net);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i] > caps[i]) return false;
  return true;
}

std::optional<MapPair> rigidly_displays(const PhyloNetwork& net, const PhyloTree& t1, const PhyloTree& t2) {
  std::optional<MapPair> found;
  const PhyloTree* trees[] = {&t1, &t2};
  enumerate_display_maps(trees, net, rigid_caps(net), [&](std::span<const DisplayMap> maps) {
    found.emplace(maps[0], maps[1]);
    return false;
  });
  return found;
}

bool enumerate_display_maps(std::span<const PhyloTree* const> trees, const PhyloNetwork& net,
                            const std::vector<int>& caps, const MapVisitor& visit) {
  if (caps.size() != net.vertex_count()) throw InputError("cap vector size does not match the network");
  MapSearch search(trees, net, caps, visit);
  return search.run();
}

}  // namespace forkpick
