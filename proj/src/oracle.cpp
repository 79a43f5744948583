#include "forkpick/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <unordered_set>

#include "forkpick/errors.hpp"

namespace forkpick {

// --- trees ------------------------------------------------------------------

namespace {

struct TreeBuilder {
  std::vector<PhyloTree::Children> ch;
  std::vector<std::string> lab;
  std::vector<VertexId> parent;
  VertexId root = 0;

  // Attaches a new leaf on the edge above v.
  void insert_above(VertexId v, const std::string& label) {
    const auto w = static_cast<VertexId>(ch.size());
    const VertexId l = w + 1;
    const VertexId p = parent[v];
    ch.push_back({v, l});
    lab.emplace_back();
    parent.push_back(p);
    ch.push_back({kNoVertex, kNoVertex});
    lab.push_back(label);
    parent.push_back(w);
    parent[v] = w;
    if (p == kNoVertex) {
      root = w;
    } else {
      auto& pc = ch[p];
      (pc[0] == v ? pc[0] : pc[1]) = w;
    }
  }
};

void grow(const TreeBuilder& b, const std::vector<std::string>& taxa, std::size_t next, std::vector<PhyloTree>& out) {
  if (next == taxa.size()) {
    out.emplace_back(b.ch, b.lab, b.root);
    return;
  }
  for (std::size_t v = 0; v < b.ch.size(); ++v) {
    TreeBuilder c = b;
    c.insert_above(static_cast<VertexId>(v), taxa[next]);
    grow(c, taxa, next + 1, out);
  }
}

}  // namespace

std::vector<PhyloTree> enumerate_trees(const std::vector<std::string>& taxa) {
  if (taxa.size() < 2 || taxa.size() > 7) throw InputError("enumerate_trees supports 2 to 7 leaves");
  for (const auto& t : taxa)
    if (!is_valid_label(t)) throw InputError("invalid label '" + t + "'");
  TreeBuilder b;
  b.ch = {{kNoVertex, kNoVertex}};
  b.lab = {taxa[0]};
  b.parent = {kNoVertex};
  b.root = 0;
  std::vector<PhyloTree> out;
  grow(b, taxa, 1, out);
  return out;
}

std::vector<std::string> letter_taxa(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.emplace_back(1, static_cast<char>('a' + i));
  return out;
}

// --- networks ---------------------------------------------------------------

namespace {

bool in_class(const PhyloNetwork& net, NetworkClass cls) {
  if (!validate(net).is_valid_network) return false;
  switch (cls) {
    case NetworkClass::general: return true;
    case NetworkClass::tree_child: return is_tree_child(net);
    case NetworkClass::temporal_tree_child: return is_temporal_tree_child(net);
  }
  return false;
}

struct EdgeRef {
  VertexId from;
  VertexId to;
};

std::vector<EdgeRef> edge_list(const PhyloNetwork& g) {
  std::vector<EdgeRef> out;
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    for (VertexId c : g.children(static_cast<VertexId>(v))) out.push_back({static_cast<VertexId>(v), c});
  return out;
}

VertexId subdivide(PhyloNetwork& g, EdgeRef e) {
  const VertexId w = g.add_vertex();
  g.remove_edge(e.from, e.to);
  g.add_edge(e.from, w);
  g.add_edge(w, e.to);
  return w;
}

}  // namespace

NetworkEnumerator::NetworkEnumerator(std::vector<std::string> taxa, NetworkClass cls)
    : taxa_(std::move(taxa)), cls_(cls) {
  if (taxa_.size() < 2 || taxa_.size() > 6) throw InputError("network enumeration supports 2 to 6 leaves");
  std::sort(taxa_.begin(), taxa_.end());
}

bool NetworkEnumerator::expand(const PhyloNetwork& g, const std::function<bool(PhyloNetwork&&)>& visit) const {
  const auto edges = edge_list(g);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = 0; j < edges.size(); ++j) {
      if (i == j) {
        if (cls_ != NetworkClass::general) continue;
        PhyloNetwork h = g;
        const VertexId r = subdivide(h, edges[i]);
        const VertexId u = subdivide(h, {edges[i].from, r});
        h.add_edge(u, r);
        if (!visit(std::move(h))) return false;
        continue;
      }
      PhyloNetwork h = g;
      const VertexId u = subdivide(h, edges[i]);
      const VertexId r = subdivide(h, edges[j]);
      h.add_edge(u, r);
      if (!topological_order(h)) continue;
      if (!visit(std::move(h))) return false;
    }
  }
  return true;
}

std::optional<PhyloNetwork> NetworkEnumerator::finish(const PhyloNetwork& g) const {
  if (cls_ != NetworkClass::general) return g;
  PhyloNetwork h = g;
  const VertexId plant = h.root();
  if (plant == kNoVertex || h.outdegree(plant) != 1) return std::nullopt;
  h.remove_edge(plant, h.children(plant)[0]);
  h = compacted(h);
  if (!validate(h).is_valid_network) return std::nullopt;
  return h;
}

const std::vector<PhyloNetwork>& NetworkEnumerator::seeds(int h) {
  if (h < 0 || h > 3) throw InputError("reticulation budget must be between 0 and 3");
  while (static_cast<int>(seeds_.size()) <= h) {
    const int k = static_cast<int>(seeds_.size());
    std::vector<PhyloNetwork> next;
    if (k == 0) {
      for (const auto& t : enumerate_trees(taxa_)) {
        PhyloNetwork net = PhyloNetwork::from_tree(t);
        if (cls_ == NetworkClass::general) {
          const VertexId r = net.root();
          const VertexId plant = net.add_vertex();
          net.add_edge(plant, r);
        }
        next.push_back(std::move(net));
      }
    } else {
      std::unordered_set<std::string> seen;
      for (const auto& g : seeds_[k - 1]) {
        expand(g, [&](PhyloNetwork&& cand) {
          if (cls_ != NetworkClass::general && !in_class(cand, cls_)) return true;
          auto key = canonical_form(cand).text;
          if (seen.insert(std::move(key)).second) next.push_back(compacted(cand));
          return true;
        });
      }
    }
    seeds_.push_back(std::move(next));
  }
  return seeds_[h];
}

const std::vector<PhyloNetwork>& NetworkEnumerator::level(int h) {
  const auto& s = seeds(h);
  if (static_cast<int>(finals_.size()) <= h) finals_.resize(h + 1);
  if (!finals_[h]) {
    std::vector<PhyloNetwork> out;
    for (const auto& g : s)
      if (auto f = finish(g)) out.push_back(std::move(*f));
    finals_[h] = std::move(out);
  }
  return *finals_[h];
}

bool NetworkEnumerator::stream(int h, const std::function<bool(const PhyloNetwork&)>& visit) {
  if (h < static_cast<int>(seeds_.size()) || h == 0) {
    for (const auto& net : level(h))
      if (!visit(net)) return false;
    return true;
  }
  for (const auto& g : seeds(h - 1)) {
    const bool go_on = expand(g, [&](PhyloNetwork&& cand) {
      if (cls_ != NetworkClass::general) {
        if (!in_class(cand, cls_)) return true;
        return visit(cand);
      }
      auto f = finish(cand);
      return !f || visit(*f);
    });
    if (!go_on) return false;
  }
  return true;
}

std::vector<PhyloNetwork> enumerate_networks(const std::vector<std::string>& taxa, int h, NetworkClass cls) {
  NetworkEnumerator e(taxa, cls);
  return e.level(h);
}

// --- independent DAG count ---------------------------------------------------

namespace {

class DagCounter {
 public:
  DagCounter(int n, int h) : n_(n), h_(h) {
    internal_ = n + 2 * h - 2;
    total_ = 2 * n + 2 * h - 1;
    labels_ = letter_taxa(n);
  }

  std::size_t run() {
    std::vector<int> roles(internal_, 0);
    std::fill(roles.end() - h_, roles.end(), 1);
    do {
      roles_ = roles;
      parents_.assign(total_, {});
      cap_.assign(total_, 0);
      cap_[0] = 2;
      place(1);
    } while (std::next_permutation(roles.begin(), roles.end()));
    return seen_.size();
  }

 private:
  bool is_reticulation(int v) const { return v >= 1 && v <= internal_ && roles_[v - 1] == 1; }

  void place(int v) {
    if (v == total_) {
      if (std::any_of(cap_.begin(), cap_.end(), [](int c) { return c != 0; })) return;
      PhyloNetwork net;
      for (int i = 0; i < total_; ++i) net.add_vertex(i > internal_ ? labels_[i - internal_ - 1] : std::string());
      for (int i = 1; i < total_; ++i)
        for (int p : parents_[i]) net.add_edge(p, i);
      if (!validate(net).is_valid_network) return;
      seen_.insert(canonical_form(net).text);
      return;
    }
    const int own_cap = v > internal_ ? 0 : (is_reticulation(v) ? 1 : 2);
    const int need = is_reticulation(v) ? 2 : 1;
    for (int a = 0; a < v; ++a) {
      if (cap_[a] == 0) continue;
      if (need == 1) {
        --cap_[a];
        parents_[v] = {a};
        cap_[v] = own_cap;
        place(v + 1);
        cap_[v] = 0;
        ++cap_[a];
        continue;
      }
      for (int b = a + 1; b < v; ++b) {
        if (cap_[b] == 0) continue;
        --cap_[a];
        --cap_[b];
        parents_[v] = {a, b};
        cap_[v] = own_cap;
        place(v + 1);
        cap_[v] = 0;
        ++cap_[a];
        ++cap_[b];
      }
    }
    parents_[v].clear();
  }

  int n_, h_, internal_, total_;
  std::vector<std::string> labels_;
  std::vector<int> roles_;
  std::vector<std::vector<int>> parents_;
  std::vector<int> cap_;
  std::unordered_set<std::string> seen_;
};

}  // namespace

std::size_t count_networks_by_dag_search(int n, int h) {
  if (n < 1 || h < 0 || 2 * n + 2 * h - 1 > 11) throw InputError("DAG search only supports tiny networks");
  if (n == 1 && h == 0) return 1;
  return DagCounter(n, h).run();
}

// --- hybrid numbers -----------------------------------------------------------

std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::h_wd: return "h_wd";
    case Quantity::h_r: return "h_r";
    case Quantity::h_t: return "h_t";
  }
  return "?";
}

namespace {

bool witness_for(const PhyloNetwork& net, const PhyloTree& t1, const PhyloTree& t2, Quantity q, HybridCertificate& cert) {
  switch (q) {
    case Quantity::h_wd: {
      if (!weakly_displays(t1, net) || !weakly_displays(t2, net)) return false;
      auto a = find_display_maps(t1, net, 1);
      auto b = find_display_maps(t2, net, 1);
      cert.maps.emplace(a.maps.at(0), b.maps.at(0));
      cert.mode = "weak";
      break;
    }
    case Quantity::h_r: {
      if (!weakly_displays(t1, net) || !weakly_displays(t2, net)) return false;
      auto pair = rigidly_displays(net, t1, t2);
      if (!pair) return false;
      cert.maps = std::move(pair);
      cert.mode = "rigid";
      break;
    }
    case Quantity::h_t: {
      if (!displays(t1, net) || !displays(t2, net)) return false;
      auto a = find_disjoint_display_map(t1, net);
      auto b = find_disjoint_display_map(t2, net);
      cert.maps.emplace(*a, *b);
      cert.mode = "display";
      break;
    }
  }
  cert.network = net;
  cert.times = temporal_labelling(net);
  return true;
}

}  // namespace

HybridCertificate brute_hybrid(const PhyloTree& t1, const PhyloTree& t2, Quantity q, int cap,
                               double time_limit_seconds) {
  if (t1.leaf_labels() != t2.leaf_labels()) throw InputError("the two trees have different leaf sets");
  HybridCertificate cert;
  cert.quantity = q;
  cert.cap = cap;
  NetworkEnumerator en(t1.leaf_labels(), q == Quantity::h_wd ? NetworkClass::general : NetworkClass::temporal_tree_child);
  const auto start = std::chrono::steady_clock::now();
  std::size_t visits = 0;
  for (int h = 0; h <= cap; ++h) {
    bool found = false;
    en.stream(h, [&](const PhyloNetwork& net) {
      if (time_limit_seconds > 0 && (++visits & 1023) == 0 &&
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > time_limit_seconds) {
        cert.timed_out = true;
        return false;
      }
      found = witness_for(net, t1, t2, q, cert);
      return !found;
    });
    if (cert.timed_out) return cert;
    if (found) {
      cert.value = h;
      return cert;
    }
  }
  return cert;
}

bool verify_certificate(const HybridCertificate& cert, const PhyloTree& t1, const PhyloTree& t2) {
  if (!cert.value) return !cert.network;
  if (!cert.network || !cert.maps) return false;
  const auto& net = *cert.network;
  if (static_cast<int>(net.reticulation_count()) != *cert.value) return false;
  if (!validate(net).is_valid_network) return false;
  if (!check_display_map(t1, net, cert.maps->first) || !check_display_map(t2, net, cert.maps->second)) return false;
  switch (cert.quantity) {
    case Quantity::h_wd: return true;
    case Quantity::h_r:
      return is_temporal_tree_child(net) && is_rigid_pair(net, cert.maps->first, cert.maps->second);
    case Quantity::h_t: {
      if (!is_temporal_tree_child(net)) return false;
      for (const auto* dm : {&cert.maps->first, &cert.maps->second}) {
        const auto g = gamma_profile(net, *dm);
        if (std::any_of(g.begin(), g.end(), [](int x) { return x > 1; })) return false;
      }
      return true;
    }
  }
  return false;
}

// --- temporal labelling oracle -----------------------------------------------

std::optional<TemporalLabelling> brute_temporal_labelling(const PhyloNetwork& net) {
  const std::size_t n = net.vertex_count();
  if (n > 8) throw InputError("brute-force labelling supports at most eight vertices");
  TemporalLabelling times(n, 0);
  const int top = static_cast<int>(n);
  // Plain odometer over {0..n-1}^n.
  while (true) {
    if (is_temporal_labelling(net, times)) return times;
    std::size_t i = 0;
    while (i < n && ++times[i] == top) times[i++] = 0;
    if (i == n) return std::nullopt;
  }
}

// --- the h_t versus h_r family -----------------------------------------------

namespace {

// Block offsets (within each 4-leaf block {4i-3,...,4i}) routed to T1 and T2.
constexpr int kFirstHalfOffsets[] = {0, 2};
constexpr int kSecondHalfOffsets[] = {1, 3};

PhyloTree balanced(const std::vector<std::string>& leaves, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return PhyloTree::single_leaf(leaves[lo]);
  const std::size_t mid = lo + (hi - lo) / 2;
  return PhyloTree::join(balanced(leaves, lo, mid), balanced(leaves, mid, hi));
}

PhyloTree balanced(const std::vector<std::string>& leaves) { return balanced(leaves, 0, leaves.size()); }

}  // namespace

std::pair<PhyloTree, PhyloTree> gen_theorem_big_trees(int m) {
  if (m < 3 || m > 5) throw InputError("m must be between 3 and 5");
  const int n = 1 << m;
  std::vector<std::string> all, first, second;
  for (int i = 1; i <= n; ++i) all.push_back(std::to_string(i));
  for (int block = 0; block < n / 4; ++block) {
    for (int off : kFirstHalfOffsets) first.push_back(std::to_string(4 * block + off + 1));
    for (int off : kSecondHalfOffsets) second.push_back(std::to_string(4 * block + off + 1));
  }
  const auto a = PhyloTree::single_leaf(std::to_string(n + 1));
  const auto b = PhyloTree::single_leaf(std::to_string(n + 2));
  PhyloTree t = PhyloTree::join(PhyloTree::join(balanced(first), a), PhyloTree::join(balanced(second), b));
  PhyloTree t_prime = PhyloTree::join(PhyloTree::join(balanced(all), a), b);
  return {std::move(t), std::move(t_prime)};
}

PhyloNetwork theorem_big_network(int m) {
  const auto [t, t_prime] = gen_theorem_big_trees(m);
  (void)t;
  const int n = 1 << m;
  // T' = ((T3, a), b): hang T3 below a reticulation whose parents sit above a and b.
  PhyloNetwork net;
  const VertexId root = net.add_vertex();
  const VertexId u = net.add_vertex();
  const VertexId w = net.add_vertex();
  const VertexId a = net.add_vertex(std::to_string(n + 1));
  const VertexId b = net.add_vertex(std::to_string(n + 2));
  const VertexId v = net.add_vertex();
  net.add_edge(root, u);
  net.add_edge(root, w);
  net.add_edge(u, a);
  net.add_edge(w, b);
  net.add_edge(u, v);
  net.add_edge(w, v);
  std::vector<std::string> all;
  for (int i = 1; i <= n; ++i) all.push_back(std::to_string(i));
  const PhyloTree t3 = balanced(all);
  std::vector<VertexId> image(t3.vertex_count());
  for (VertexId x : t3.preorder()) image[x] = net.add_vertex(t3.label(x));
  for (VertexId x : t3.preorder())
    if (!t3.is_leaf(x))
      for (VertexId c : t3.children(x)) net.add_edge(image[x], image[c]);
  net.add_edge(v, image[t3.root()]);
  return net;
}

}  // namespace forkpick
