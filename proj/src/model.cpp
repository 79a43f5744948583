#include "forkpick/model.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "forkpick/errors.hpp"

namespace forkpick {

bool is_valid_label(std::string_view label) {
  if (label.empty()) return false;
  return std::all_of(label.begin(), label.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  });
}

// --- PhyloTree --------------------------------------------------------------

PhyloTree::PhyloTree(std::vector<Children> children, std::vector<std::string> labels, VertexId root)
    : children_(std::move(children)), labels_(std::move(labels)), root_(root) {
  const auto n = static_cast<VertexId>(children_.size());
  if (labels_.size() != children_.size()) throw InputError("tree: label vector size mismatch");
  if (n == 0) throw InputError("tree: no vertices");
  if (root_ < 0 || root_ >= n) throw InputError("tree: root out of range");
  parent_.assign(n, kNoVertex);
  for (VertexId v = 0; v < n; ++v) {
    const auto [a, b] = children_[v];
    if (a == kNoVertex && b == kNoVertex) {
      if (!is_valid_label(labels_[v])) throw InputError("tree: invalid leaf label '" + labels_[v] + "'");
      leaf_index_.emplace_back(labels_[v], v);
      continue;
    }
    if (a == kNoVertex || b == kNoVertex) throw InputError("tree: vertex with a single child");
    if (!labels_[v].empty()) throw InputError("tree: internal vertex carries a label");
    if (a == b) throw InputError("tree: parallel edges");
    for (VertexId c : {a, b}) {
      if (c < 0 || c >= n) throw InputError("tree: child id out of range");
      if (parent_[c] != kNoVertex) throw InputError("tree: vertex with indegree > 1");
      parent_[c] = v;
    }
  }
  if (parent_[root_] != kNoVertex) throw InputError("tree: root has a parent");
  std::sort(leaf_index_.begin(), leaf_index_.end());
  for (std::size_t i = 1; i < leaf_index_.size(); ++i) {
    if (leaf_index_[i].first == leaf_index_[i - 1].first)
      throw InputError("tree: duplicate leaf label '" + leaf_index_[i].first + "'");
  }
  // Every vertex must be reachable from the root (rules out cycles and forests).
  if (preorder().size() != children_.size()) throw InputError("tree: not connected");
}

PhyloTree PhyloTree::single_leaf(std::string label) {
  return PhyloTree({{kNoVertex, kNoVertex}}, {std::move(label)}, 0);
}

PhyloTree PhyloTree::join(const PhyloTree& left, const PhyloTree& right) {
  std::vector<Children> ch;
  std::vector<std::string> lab;
  ch.reserve(left.vertex_count() + right.vertex_count() + 1);
  auto append = [&](const PhyloTree& t) {
    const auto offset = static_cast<VertexId>(ch.size());
    for (std::size_t v = 0; v < t.vertex_count(); ++v) {
      auto c = t.children_[v];
      if (c[0] != kNoVertex) c = {c[0] + offset, c[1] + offset};
      ch.push_back(c);
      lab.push_back(t.labels_[v]);
    }
    return t.root_ + offset;
  };
  const VertexId l = append(left);
  const VertexId r = append(right);
  ch.push_back({l, r});
  lab.emplace_back();
  return PhyloTree(std::move(ch), std::move(lab), static_cast<VertexId>(ch.size() - 1));
}

VertexId PhyloTree::sibling(VertexId v) const {
  const VertexId p = parent_[v];
  if (p == kNoVertex) return kNoVertex;
  return children_[p][0] == v ? children_[p][1] : children_[p][0];
}

std::optional<VertexId> PhyloTree::leaf(std::string_view label) const {
  auto it = std::lower_bound(leaf_index_.begin(), leaf_index_.end(), label,
                             [](const auto& e, std::string_view l) { return e.first < l; });
  if (it == leaf_index_.end() || it->first != label) return std::nullopt;
  return it->second;
}

VertexId PhyloTree::leaf_or_throw(std::string_view label) const {
  auto v = leaf(label);
  if (!v) throw InputError("unknown leaf label '" + std::string(label) + "'");
  return *v;
}

std::vector<std::string> PhyloTree::leaf_labels() const {
  std::vector<std::string> out;
  out.reserve(leaf_index_.size());
  for (const auto& [l, v] : leaf_index_) out.push_back(l);
  return out;
}

std::vector<VertexId> PhyloTree::preorder() const {
  std::vector<VertexId> out;
  if (empty()) return out;
  std::vector<VertexId> stack{root_};
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    out.push_back(v);
    if (out.size() > children_.size()) break;  // cycle guard during construction
    if (!is_leaf(v)) {
      stack.push_back(children_[v][1]);
      stack.push_back(children_[v][0]);
    }
  }
  return out;
}

std::vector<VertexId> PhyloTree::postorder() const {
  auto pre = preorder();
  // Reversed preorder with children pushed left-first gives a valid postorder
  // (every vertex after its descendants).
  std::reverse(pre.begin(), pre.end());
  return pre;
}

std::vector<std::string> PhyloTree::cluster(VertexId v) const {
  std::vector<std::string> out;
  std::vector<VertexId> stack{v};
  while (!stack.empty()) {
    const VertexId u = stack.back();
    stack.pop_back();
    if (is_leaf(u)) {
      out.push_back(labels_[u]);
    } else {
      stack.push_back(children_[u][0]);
      stack.push_back(children_[u][1]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- PhyloNetwork -----------------------------------------------------------

PhyloNetwork PhyloNetwork::from_tree(const PhyloTree& tree) {
  PhyloNetwork net;
  for (std::size_t v = 0; v < tree.vertex_count(); ++v) net.add_vertex(tree.label(static_cast<VertexId>(v)));
  for (std::size_t v = 0; v < tree.vertex_count(); ++v) {
    const auto id = static_cast<VertexId>(v);
    if (tree.is_leaf(id)) continue;
    for (VertexId c : tree.children(id)) net.add_edge(id, c);
  }
  return net;
}

VertexId PhyloNetwork::add_vertex(std::string label) {
  children_.emplace_back();
  parents_.emplace_back();
  labels_.push_back(std::move(label));
  return static_cast<VertexId>(children_.size() - 1);
}

void PhyloNetwork::add_edge(VertexId from, VertexId to) {
  children_[from].push_back(to);
  parents_[to].push_back(from);
}

bool PhyloNetwork::remove_edge(VertexId from, VertexId to) {
  auto& ch = children_[from];
  auto it = std::find(ch.begin(), ch.end(), to);
  if (it == ch.end()) return false;
  ch.erase(it);
  auto& pa = parents_[to];
  pa.erase(std::find(pa.begin(), pa.end(), from));
  return true;
}

std::size_t PhyloNetwork::edge_count() const noexcept {
  std::size_t n = 0;
  for (const auto& c : children_) n += c.size();
  return n;
}

VertexRole PhyloNetwork::role(VertexId v) const {
  const auto in = indegree(v);
  const auto out = outdegree(v);
  if (in == 0 && out == 2) return VertexRole::root;
  if (in == 1 && out == 2) return VertexRole::tree;
  if (in == 2 && out == 1) return VertexRole::reticulation;
  if (in == 1 && out == 0) return VertexRole::leaf;
  return VertexRole::invalid;
}

VertexId PhyloNetwork::root() const {
  VertexId found = kNoVertex;
  for (std::size_t v = 0; v < vertex_count(); ++v) {
    if (parents_[v].empty()) {
      if (found != kNoVertex) return kNoVertex;
      found = static_cast<VertexId>(v);
    }
  }
  return found;
}

std::vector<VertexId> PhyloNetwork::reticulations() const {
  std::vector<VertexId> out;
  for (std::size_t v = 0; v < vertex_count(); ++v)
    if (parents_[v].size() >= 2) out.push_back(static_cast<VertexId>(v));
  return out;
}

std::size_t PhyloNetwork::reticulation_count() const { return reticulations().size(); }

std::vector<VertexId> PhyloNetwork::leaves() const {
  std::vector<VertexId> out;
  for (std::size_t v = 0; v < vertex_count(); ++v)
    if (children_[v].empty()) out.push_back(static_cast<VertexId>(v));
  return out;
}

std::optional<VertexId> PhyloNetwork::leaf(std::string_view label) const {
  for (std::size_t v = 0; v < vertex_count(); ++v)
    if (children_[v].empty() && labels_[v] == label) return static_cast<VertexId>(v);
  return std::nullopt;
}

std::vector<std::string> PhyloNetwork::leaf_labels() const {
  std::vector<std::string> out;
  for (VertexId v : leaves()) out.push_back(labels_[v]);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<PhyloTree> PhyloNetwork::as_tree() const {
  const VertexId r = root();
  if (r == kNoVertex) return std::nullopt;
  std::vector<PhyloTree::Children> ch(vertex_count(), {kNoVertex, kNoVertex});
  for (std::size_t v = 0; v < vertex_count(); ++v) {
    if (parents_[v].size() > 1) return std::nullopt;
    if (children_[v].size() == 2) {
      ch[v] = {children_[v][0], children_[v][1]};
    } else if (!children_[v].empty()) {
      return std::nullopt;
    }
  }
  try {
    return PhyloTree(std::move(ch), labels_, r);
  } catch (const InputError&) {
    return std::nullopt;
  }
}

// --- tree queries -----------------------------------------------------------

VertexId lca(const PhyloTree& tree, std::span<const std::string> leaves) {
  if (leaves.empty()) throw InputError("lca: empty leaf set");
  std::vector<int> count(tree.vertex_count(), 0);
  std::set<std::string> wanted(leaves.begin(), leaves.end());
  for (const auto& l : wanted) count[tree.leaf_or_throw(l)] = 1;
  const auto target = static_cast<int>(wanted.size());
  for (VertexId v : tree.postorder()) {
    if (!tree.is_leaf(v)) count[v] = count[tree.children(v)[0]] + count[tree.children(v)[1]];
    if (count[v] == target) return v;  // first full vertex in postorder is the lowest
  }
  return tree.root();
}

PhyloTree restrict_to(const PhyloTree& tree, std::span<const std::string> keep) {
  if (keep.empty()) throw InputError("restrict: empty leaf set");
  std::vector<char> kept(tree.vertex_count(), 0);
  for (const auto& l : keep) kept[tree.leaf_or_throw(l)] = 1;

  std::vector<PhyloTree::Children> ch;
  std::vector<std::string> lab;
  std::vector<VertexId> image(tree.vertex_count(), kNoVertex);
  for (VertexId v : tree.postorder()) {
    if (tree.is_leaf(v)) {
      if (!kept[v]) continue;
      image[v] = static_cast<VertexId>(ch.size());
      ch.push_back({kNoVertex, kNoVertex});
      lab.push_back(tree.label(v));
      continue;
    }
    const VertexId a = image[tree.children(v)[0]];
    const VertexId b = image[tree.children(v)[1]];
    if (a != kNoVertex && b != kNoVertex) {
      image[v] = static_cast<VertexId>(ch.size());
      ch.push_back({a, b});
      lab.emplace_back();
    } else {
      image[v] = a != kNoVertex ? a : b;
    }
  }
  const VertexId root = image[tree.root()];
  return PhyloTree(std::move(ch), std::move(lab), root);
}

namespace {

// Returns the smallest leaf label below each vertex.
std::vector<std::string> min_leaf_labels(const PhyloTree& tree) {
  std::vector<std::string> m(tree.vertex_count());
  for (VertexId v : tree.postorder()) {
    if (tree.is_leaf(v)) {
      m[v] = tree.label(v);
    } else {
      m[v] = std::min(m[tree.children(v)[0]], m[tree.children(v)[1]]);
    }
  }
  return m;
}

void write_tree(const PhyloTree& t, VertexId v, const std::vector<std::string>& minl, std::string& out) {
  if (t.is_leaf(v)) {
    out += t.label(v);
    return;
  }
  auto [a, b] = t.children(v);
  if (minl[b] < minl[a]) std::swap(a, b);
  out += '(';
  write_tree(t, a, minl, out);
  out += ',';
  write_tree(t, b, minl, out);
  out += ')';
}

}  // namespace

bool isomorphic(const PhyloTree& a, const PhyloTree& b) {
  if (a.leaf_labels() != b.leaf_labels()) throw InputError("isomorphic: leaf sets differ");
  return canonical_form(a) == canonical_form(b);
}

std::vector<std::pair<std::string, std::string>> cherries(const PhyloTree& tree) {
  std::vector<std::pair<std::string, std::string>> out;
  if (tree.leaf_count() < 2) return out;
  for (std::size_t v = 0; v < tree.vertex_count(); ++v) {
    const auto id = static_cast<VertexId>(v);
    if (tree.is_leaf(id)) continue;
    const auto [a, b] = tree.children(id);
    if (tree.is_leaf(a) && tree.is_leaf(b)) out.emplace_back(std::minmax(tree.label(a), tree.label(b)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool has_pendant_subtree(const PhyloTree& tree, const PhyloTree& sub) {
  const auto labels = sub.leaf_labels();
  for (const auto& l : labels)
    if (!tree.leaf(l)) return false;
  const VertexId v = lca(tree, labels);
  if (tree.cluster(v) != labels) return false;
  return canonical_form(restrict_to(tree, labels)) == canonical_form(sub);
}

CanonicalForm canonical_form(const PhyloTree& tree) {
  CanonicalForm cf;
  if (tree.empty()) return cf;
  const auto minl = min_leaf_labels(tree);
  write_tree(tree, tree.root(), minl, cf.text);
  cf.text += ';';
  return cf;
}

// --- network canonical form ------------------------------------------------

namespace {

class NetworkCanonicalizer {
 public:
  explicit NetworkCanonicalizer(const PhyloNetwork& net) : net_(net) {
    auto order = topological_order(net);
    if (!order) throw InputError("canonical_form: graph has a cycle");
    const std::size_t n = net.vertex_count();
    sig_.resize(n);
    minleaf_.resize(n);
    for (auto it = order->rbegin(); it != order->rend(); ++it) {
      const VertexId v = *it;
      std::vector<std::string> cs;
      std::string ml = net.children(v).empty() ? net.label(v) : std::string();
      for (VertexId c : net.children(v)) {
        cs.push_back(sig_[c]);
        if (!minleaf_[c].empty() && (ml.empty() || minleaf_[c] < ml)) ml = minleaf_[c];
      }
      std::sort(cs.begin(), cs.end());
      std::string s = std::to_string(net.indegree(v));
      s += ':';
      s += net.label(v);
      s += '(';
      for (std::size_t i = 0; i < cs.size(); ++i) {
        if (i) s += ',';
        s += cs[i];
      }
      s += ')';
      sig_[v] = std::move(s);
      minleaf_[v] = std::move(ml);
    }
    ordered_.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
      auto& ch = ordered_[v];
      ch = net.children(static_cast<VertexId>(v));
      std::sort(ch.begin(), ch.end(), [&](VertexId a, VertexId b) { return key_less(a, b); });
      // Record runs of children with equal keys: their relative order is a free choice.
      for (std::size_t i = 0; i < ch.size();) {
        std::size_t j = i + 1;
        while (j < ch.size() && !key_less(ch[i], ch[j]) && ch[i] != ch[j]) ++j;
        if (j - i > 1) ties_.push_back({static_cast<VertexId>(v), i, j});
        i = j;
      }
    }
    for (std::size_t v = 0; v < n; ++v)
      if (net.parents(static_cast<VertexId>(v)).empty()) roots_.push_back(static_cast<VertexId>(v));
    std::sort(roots_.begin(), roots_.end(), [&](VertexId a, VertexId b) { return key_less(a, b); });
  }

  std::string run() {
    std::string best = serialize();
    if (ties_.empty()) return best;
    // Odometer over permutations of every tie group; each group starts sorted.
    for (auto& t : ties_) std::sort(ordered_[t.vertex].begin() + t.begin, ordered_[t.vertex].begin() + t.end);
    std::size_t guard = 0;
    while (true) {
      std::size_t i = 0;
      for (; i < ties_.size(); ++i) {
        auto& t = ties_[i];
        auto first = ordered_[t.vertex].begin() + t.begin;
        auto last = ordered_[t.vertex].begin() + t.end;
        if (std::next_permutation(first, last)) break;
      }
      if (i == ties_.size()) break;
      auto s = serialize();
      if (s < best) best = std::move(s);
      if (++guard > 200000) break;
    }
    return best;
  }

 private:
  struct Tie {
    VertexId vertex;
    std::size_t begin, end;
  };

  bool key_less(VertexId a, VertexId b) const {
    if (minleaf_[a] != minleaf_[b]) return minleaf_[a] < minleaf_[b];
    return sig_[a] < sig_[b];
  }

  std::string serialize() {
    std::string out;
    tag_.assign(net_.vertex_count(), 0);
    next_tag_ = 0;
    for (std::size_t i = 0; i < roots_.size(); ++i) {
      write(roots_[i], out);
      out += ';';
    }
    return out;
  }

  void write(VertexId v, std::string& out) {
    const bool shared = net_.indegree(v) >= 2;
    if (shared && tag_[v] != 0) {
      out += "#H" + std::to_string(tag_[v]);
      return;
    }
    if (shared) tag_[v] = ++next_tag_;
    const auto& ch = ordered_[v];
    if (!ch.empty()) {
      out += '(';
      for (std::size_t i = 0; i < ch.size(); ++i) {
        if (i) out += ',';
        write(ch[i], out);
      }
      out += ')';
    }
    out += net_.label(v);
    if (shared) out += "#H" + std::to_string(tag_[v]);
  }

  const PhyloNetwork& net_;
  std::vector<std::string> sig_;
  std::vector<std::string> minleaf_;
  std::vector<std::vector<VertexId>> ordered_;
  std::vector<Tie> ties_;
  std::vector<VertexId> roots_;
  std::vector<int> tag_;
  int next_tag_ = 0;
};

}  // namespace

CanonicalForm canonical_form(const PhyloNetwork& net) {
  if (net.vertex_count() == 0) return {};
  return {NetworkCanonicalizer(net).run()};
}

// --- network queries --------------------------------------------------------

std::optional<std::vector<VertexId>> topological_order(const PhyloNetwork& net) {
  const std::size_t n = net.vertex_count();
  std::vector<std::size_t> indeg(n);
  std::vector<VertexId> order;
  order.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    indeg[v] = net.indegree(static_cast<VertexId>(v));
    if (indeg[v] == 0) order.push_back(static_cast<VertexId>(v));
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (VertexId c : net.children(order[i]))
      if (--indeg[c] == 0) order.push_back(c);
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

std::vector<PendantSubnetwork> pendant_subnetworks(const PhyloNetwork& net) {
  std::vector<PendantSubnetwork> out;
  const std::size_t n = net.vertex_count();
  for (std::size_t vv = 0; vv < n; ++vv) {
    const auto v = static_cast<VertexId>(vv);
    if (net.role(v) != VertexRole::tree) continue;
    std::vector<char> below(n, 0);
    std::vector<VertexId> stack{v}, members;
    below[v] = 1;
    while (!stack.empty()) {
      const VertexId u = stack.back();
      stack.pop_back();
      members.push_back(u);
      for (VertexId c : net.children(u)) {
        if (!below[c]) {
          below[c] = 1;
          stack.push_back(c);
        }
      }
    }
    bool closed = true;
    bool is_tree = true;
    std::size_t leaf_count = 0;
    for (VertexId u : members) {
      if (net.children(u).empty()) ++leaf_count;
      if (u == v) continue;
      if (net.indegree(u) >= 2) is_tree = false;
      for (VertexId p : net.parents(u)) closed = closed && below[p];
    }
    if (!closed || leaf_count < 2) continue;
    std::sort(members.begin(), members.end());
    std::vector<VertexId> remap(n, kNoVertex);
    PendantSubnetwork ps;
    ps.cut = v;
    ps.is_tree = is_tree;
    for (VertexId u : members) remap[u] = ps.network.add_vertex(net.label(u));
    for (VertexId u : members)
      for (VertexId c : net.children(u)) ps.network.add_edge(remap[u], remap[c]);
    out.push_back(std::move(ps));
  }
  return out;
}

PhyloNetwork compacted(const PhyloNetwork& net) {
  std::vector<VertexId> remap(net.vertex_count(), kNoVertex);
  PhyloNetwork out;
  for (std::size_t v = 0; v < net.vertex_count(); ++v) {
    const auto id = static_cast<VertexId>(v);
    if (net.indegree(id) + net.outdegree(id) == 0 && net.label(id).empty()) continue;
    remap[v] = out.add_vertex(net.label(id));
  }
  for (std::size_t v = 0; v < net.vertex_count(); ++v)
    for (VertexId c : net.children(static_cast<VertexId>(v))) out.add_edge(remap[v], remap[c]);
  return out;
}

PhyloNetwork remove_leaves(const PhyloNetwork& net, std::span<const std::string> labels) {
  PhyloNetwork g = net;
  std::vector<char> dead(g.vertex_count(), 0);
  auto kill = [&](VertexId v) {
    for (VertexId c : std::vector<VertexId>(g.children(v))) g.remove_edge(v, c);
    for (VertexId p : std::vector<VertexId>(g.parents(v))) g.remove_edge(p, v);
    g.set_label(v, {});
    dead[v] = 1;
  };
  for (const auto& l : labels) {
    auto v = g.leaf(l);
    if (!v) throw InputError("remove_leaves: unknown leaf '" + l + "'");
    kill(*v);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t vv = 0; vv < g.vertex_count(); ++vv) {
      const auto v = static_cast<VertexId>(vv);
      if (dead[v]) continue;
      const auto in = g.indegree(v);
      const auto out = g.outdegree(v);
      if (out == 0 && g.label(v).empty()) {
        kill(v);
        changed = true;
        continue;
      }
      // Collapse one duplicate out-edge.
      auto ch = g.children(v);
      std::sort(ch.begin(), ch.end());
      if (std::adjacent_find(ch.begin(), ch.end()) != ch.end()) {
        const VertexId c = *std::adjacent_find(ch.begin(), ch.end());
        g.remove_edge(v, c);
        changed = true;
        continue;
      }
      if (in == 1 && out == 1) {
        const VertexId p = g.parents(v)[0];
        const VertexId c = g.children(v)[0];
        kill(v);
        g.add_edge(p, c);
        changed = true;
        continue;
      }
      if (in == 0 && out == 1) {
        kill(v);
        changed = true;
      }
    }
  }
  return compacted(g);
}

}  // namespace forkpick
