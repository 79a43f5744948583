#include "forkpick/netcheck.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace forkpick {

namespace {

std::string describe(const PhyloNetwork& net, VertexId v) {
  std::string s = "vertex " + std::to_string(v);
  if (!net.label(v).empty()) s += " (" + net.label(v) + ")";
  return s;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

std::optional<std::string> first_violation(const PhyloNetwork& net) {
  const std::size_t n = net.vertex_count();
  if (n == 0) return "empty graph";
  if (!topological_order(net)) return "graph has a directed cycle";
  const VertexId root = net.root();
  if (root == kNoVertex) return "graph does not have exactly one root";
  if (n == 1) {
    if (!is_valid_label(net.label(root))) return "single vertex without a valid label";
    return std::nullopt;
  }
  std::set<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = static_cast<VertexId>(i);
    const auto role = net.role(v);
    if (role == VertexRole::invalid) {
      return describe(net, v) + ": indegree " + std::to_string(net.indegree(v)) + ", outdegree " +
             std::to_string(net.outdegree(v));
    }
    if (role == VertexRole::leaf) {
      if (!is_valid_label(net.label(v))) return describe(net, v) + ": leaf without a valid label";
      if (!labels.insert(net.label(v)).second) return describe(net, v) + ": duplicate leaf label";
    } else if (!net.label(v).empty()) {
      return describe(net, v) + ": internal vertex carries a label";
    }
    auto ch = net.children(v);
    std::sort(ch.begin(), ch.end());
    if (std::adjacent_find(ch.begin(), ch.end()) != ch.end())
      return "parallel edges from " + describe(net, v);
  }
  return std::nullopt;
}

}  // namespace

bool is_tree_child(const PhyloNetwork& net) {
  for (std::size_t i = 0; i < net.vertex_count(); ++i) {
    const auto& ch = net.children(static_cast<VertexId>(i));
    if (ch.empty()) continue;
    if (std::none_of(ch.begin(), ch.end(), [&](VertexId c) { return net.indegree(c) <= 1; })) return false;
  }
  return true;
}

bool has_shortcut(const PhyloNetwork& net) {
  const std::size_t n = net.vertex_count();
  for (std::size_t i = 0; i < n; ++i) {
    const auto u = static_cast<VertexId>(i);
    for (VertexId v : net.children(u)) {
      // Is v reachable from u through some other child?
      std::vector<char> seen(n, 0);
      std::vector<VertexId> stack;
      for (VertexId c : net.children(u))
        if (c != v) stack.push_back(c);
      while (!stack.empty()) {
        const VertexId x = stack.back();
        stack.pop_back();
        if (x == v) return true;
        if (seen[x]) continue;
        seen[x] = 1;
        for (VertexId c : net.children(x)) stack.push_back(c);
      }
    }
  }
  return false;
}

std::optional<TemporalLabelling> temporal_labelling(const PhyloNetwork& net) {
  const std::size_t n = net.vertex_count();
  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = static_cast<VertexId>(i);
    if (net.indegree(v) >= 2)
      for (VertexId p : net.parents(v)) sets.unite(i, static_cast<std::size_t>(p));
  }
  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<int> indeg(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (VertexId c : net.children(static_cast<VertexId>(i))) {
      if (net.indegree(c) >= 2) continue;
      const std::size_t a = sets.find(i), b = sets.find(static_cast<std::size_t>(c));
      if (a == b) return std::nullopt;
      succ[a].push_back(b);
      ++indeg[b];
    }
  }
  std::vector<int> level(n, 0);
  std::vector<std::size_t> queue;
  std::size_t classes = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (sets.find(i) != i) continue;
    ++classes;
    if (indeg[i] == 0) queue.push_back(i);
  }
  for (std::size_t k = 0; k < queue.size(); ++k) {
    const std::size_t a = queue[k];
    for (std::size_t b : succ[a]) {
      level[b] = std::max(level[b], level[a] + 1);
      if (--indeg[b] == 0) queue.push_back(b);
    }
  }
  if (queue.size() != classes) return std::nullopt;
  TemporalLabelling times(n);
  for (std::size_t i = 0; i < n; ++i) times[i] = level[sets.find(i)];
  return times;
}

bool is_temporal_labelling(const PhyloNetwork& net, const TemporalLabelling& times) {
  if (times.size() != net.vertex_count()) return false;
  for (std::size_t i = 0; i < net.vertex_count(); ++i) {
    if (times[i] < 0) return false;
    for (VertexId c : net.children(static_cast<VertexId>(i))) {
      if (net.indegree(c) >= 2 ? times[i] != times[c] : times[i] >= times[c]) return false;
    }
  }
  return true;
}

ClassReport validate(const PhyloNetwork& net) {
  ClassReport r;
  r.witness = first_violation(net);
  r.is_valid_network = !r.witness;
  if (!r.is_valid_network) return r;
  r.is_tree_child = is_tree_child(net);
  r.has_shortcut = has_shortcut(net);
  r.is_normal = r.is_tree_child && !r.has_shortcut;
  r.is_temporal = temporal_labelling(net).has_value();
  if (!r.is_tree_child) {
    for (std::size_t i = 0; i < net.vertex_count() && !r.witness; ++i) {
      const auto v = static_cast<VertexId>(i);
      const auto& ch = net.children(v);
      if (!ch.empty() && std::all_of(ch.begin(), ch.end(), [&](VertexId c) { return net.indegree(c) >= 2; }))
        r.witness = describe(net, v) + ": every child is a reticulation";
    }
  } else if (!r.is_temporal) {
    r.witness = "no temporal labelling exists";
  }
  return r;
}

}  // namespace forkpick
