#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace forkpick {

using VertexId = std::int32_t;
inline constexpr VertexId kNoVertex = -1;

// True iff `label` is a non-empty token over [A-Za-z0-9_].
bool is_valid_label(std::string_view label);

/// Rooted binary leaf-labelled tree.
///
/// Vertex ids are dense indices assigned at construction. Internal vertices
/// have exactly two children; leaves carry unique labels. A single-leaf tree
/// is representable (it is what remains after applying a complete sequence of
/// leaf removals) but most operations require at least two leaves.
class PhyloTree {
 public:
  using Children = std::array<VertexId, 2>;

  PhyloTree() = default;

  // Checked constructor. Leaves have children {kNoVertex, kNoVertex} and a
  // non-empty label; internal vertices have two distinct children and no label.
  PhyloTree(std::vector<Children> children, std::vector<std::string> labels, VertexId root);

  static PhyloTree single_leaf(std::string label);
  // New root with `left` and `right` as its two subtrees. Leaf sets must be disjoint.
  static PhyloTree join(const PhyloTree& left, const PhyloTree& right);

  bool empty() const noexcept { return children_.empty(); }
  std::size_t vertex_count() const noexcept { return children_.size(); }
  std::size_t leaf_count() const noexcept { return leaf_index_.size(); }
  VertexId root() const noexcept { return root_; }

  bool is_leaf(VertexId v) const { return children_[v][0] == kNoVertex; }
  const Children& children(VertexId v) const { return children_[v]; }
  VertexId parent(VertexId v) const { return parent_[v]; }
  VertexId sibling(VertexId v) const;
  const std::string& label(VertexId v) const { return labels_[v]; }

  std::optional<VertexId> leaf(std::string_view label) const;
  // Throws InputError for unknown labels.
  VertexId leaf_or_throw(std::string_view label) const;
  // Leaf labels in lexicographic order.
  std::vector<std::string> leaf_labels() const;

  std::vector<VertexId> postorder() const;
  std::vector<VertexId> preorder() const;
  // Labels of the leaves below `v`, sorted.
  std::vector<std::string> cluster(VertexId v) const;

 private:
  std::vector<Children> children_;
  std::vector<VertexId> parent_;
  std::vector<std::string> labels_;
  std::vector<std::pair<std::string, VertexId>> leaf_index_;  // sorted by label
  VertexId root_ = kNoVertex;
};

enum class VertexRole { root, tree, reticulation, leaf, invalid };

/// Rooted directed acyclic graph with labelled sinks.
///
/// The container itself accepts arbitrary graphs (including parallel edges,
/// which appear as intermediates during enumeration); roles are derived from
/// degrees and `netcheck::validate` decides whether the graph is a phylogenetic
/// network. Parsers and constructors in this library only hand out valid ones
/// unless asked otherwise.
class PhyloNetwork {
 public:
  PhyloNetwork() = default;

  static PhyloNetwork from_tree(const PhyloTree& tree);

  VertexId add_vertex(std::string label = {});
  void add_edge(VertexId from, VertexId to);
  // Removes one copy of the edge; returns false if absent.
  bool remove_edge(VertexId from, VertexId to);
  void set_label(VertexId v, std::string label) { labels_[v] = std::move(label); }

  std::size_t vertex_count() const noexcept { return children_.size(); }
  std::size_t edge_count() const noexcept;
  const std::vector<VertexId>& children(VertexId v) const { return children_[v]; }
  const std::vector<VertexId>& parents(VertexId v) const { return parents_[v]; }
  const std::string& label(VertexId v) const { return labels_[v]; }
  std::size_t indegree(VertexId v) const { return parents_[v].size(); }
  std::size_t outdegree(VertexId v) const { return children_[v].size(); }

  VertexRole role(VertexId v) const;
  // The unique indegree-0 vertex, or kNoVertex when there is none or several.
  VertexId root() const;
  std::vector<VertexId> reticulations() const;
  std::size_t reticulation_count() const;
  std::vector<VertexId> leaves() const;
  std::optional<VertexId> leaf(std::string_view label) const;
  std::vector<std::string> leaf_labels() const;

  // The tree, if the graph is a valid network without reticulations.
  std::optional<PhyloTree> as_tree() const;

 private:
  std::vector<std::vector<VertexId>> children_;
  std::vector<std::vector<VertexId>> parents_;
  std::vector<std::string> labels_;
};

// Deterministic serialization used as a memoization / deduplication key.
// Equal text iff the objects are isomorphic (identity on leaf labels).
struct CanonicalForm {
  std::string text;
  friend auto operator<=>(const CanonicalForm&, const CanonicalForm&) = default;
};

// --- tree queries ---------------------------------------------------------

// Last common ancestor of the named leaves. Throws InputError for unknown or
// empty label sets.
VertexId lca(const PhyloTree& tree, std::span<const std::string> leaves);

// T|Y: minimal subtree spanning Y with unary vertices suppressed.
PhyloTree restrict_to(const PhyloTree& tree, std::span<const std::string> keep);

// Identity-on-leaves isomorphism. Throws InputError if the leaf sets differ.
bool isomorphic(const PhyloTree& a, const PhyloTree& b);

// Sibling leaf pairs, each ordered (smaller, larger) and the list sorted.
std::vector<std::pair<std::string, std::string>> cherries(const PhyloTree& tree);

// True iff some vertex has exactly the given leaf set below it and the
// subtree there is isomorphic to `sub`.
bool has_pendant_subtree(const PhyloTree& tree, const PhyloTree& sub);

CanonicalForm canonical_form(const PhyloTree& tree);
CanonicalForm canonical_form(const PhyloNetwork& net);

// --- network queries ------------------------------------------------------

std::optional<std::vector<VertexId>> topological_order(const PhyloNetwork& net);

struct PendantSubnetwork {
  VertexId cut = kNoVertex;  // the tree vertex whose in-edge is deleted
  PhyloNetwork network;      // the component below it, re-indexed
  bool is_tree = false;      // reticulation-free
};

// Every tree vertex whose in-edge splits off a phylogenetic network with at
// least two leaves.
std::vector<PendantSubnetwork> pendant_subnetworks(const PhyloNetwork& net);

// Removes the named leaves, then repeatedly deletes unlabelled sinks,
// collapses parallel edges and suppresses in-1/out-1 vertices (and a root of
// outdegree 1). The result is re-indexed.
PhyloNetwork remove_leaves(const PhyloNetwork& net, std::span<const std::string> labels);

// Drops isolated vertices and renumbers densely, preserving relative order.
PhyloNetwork compacted(const PhyloNetwork& net);

}  // namespace forkpick
