#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "forkpick/display.hpp"
#include "forkpick/model.hpp"
#include "forkpick/netcheck.hpp"

namespace forkpick {

// Every rooted binary tree on `taxa` once per isomorphism class, by stepwise
// leaf addition; (2n-3)!! trees. Requires 2 <= n <= 7.
std::vector<PhyloTree> enumerate_trees(const std::vector<std::string>& taxa);

// Labels "a", "b", ... for quick experiments.
std::vector<std::string> letter_taxa(int n);

enum class NetworkClass { general, tree_child, temporal_tree_child };

// Networks with exactly h reticulations, one per isomorphism class, built
// level by level by inserting an edge between two subdivided edges.
// Requires n <= 6, h <= 3. Levels are cached between calls.
class NetworkEnumerator {
 public:
  NetworkEnumerator(std::vector<std::string> taxa, NetworkClass cls);

  const std::vector<PhyloNetwork>& level(int h);

  // Visits the networks of level h without storing or deduplicating them
  // (each isomorphism class may be visited several times). Stops when the
  // visitor returns false; returns false in that case.
  bool stream(int h, const std::function<bool(const PhyloNetwork&)>& visit);

  const std::vector<std::string>& taxa() const { return taxa_; }
  NetworkClass network_class() const { return cls_; }

 private:
  // Intermediate graphs for level h: valid networks for the tree-child
  // classes; planted multigraphs for the general class.
  const std::vector<PhyloNetwork>& seeds(int h);
  bool expand(const PhyloNetwork& g, const std::function<bool(PhyloNetwork&&)>& visit) const;
  std::optional<PhyloNetwork> finish(const PhyloNetwork& g) const;

  std::vector<std::string> taxa_;
  NetworkClass cls_;
  std::vector<std::vector<PhyloNetwork>> seeds_;
  std::vector<std::optional<std::vector<PhyloNetwork>>> finals_;
};

std::vector<PhyloNetwork> enumerate_networks(const std::vector<std::string>& taxa, int h, NetworkClass cls);

// Independent count of general networks on n leaves with h reticulations
// (isomorphism classes), by placing vertices in topological order and
// choosing parents under the degree constraints. Tiny inputs only.
std::size_t count_networks_by_dag_search(int n, int h);

enum class Quantity { h_wd, h_r, h_t };

std::string to_string(Quantity q);

struct HybridCertificate {
  Quantity quantity = Quantity::h_r;
  int cap = 0;
  std::optional<int> value;  // none means "> cap"
  std::optional<PhyloNetwork> network;
  std::optional<TemporalLabelling> times;
  std::optional<MapPair> maps;
  std::string mode;  // weak, rigid or display
  bool timed_out = false;
};

// Smallest h <= cap admitting a witness network of the quantity's class.
// A positive time limit stops the search early with timed_out set.
HybridCertificate brute_hybrid(const PhyloTree& t1, const PhyloTree& t2, Quantity q, int cap,
                               double time_limit_seconds = 0.0);

// Re-verifies a certificate's witness for the given trees.
bool verify_certificate(const HybridCertificate& cert, const PhyloTree& t1, const PhyloTree& t2);

// Labelling search over all level assignments, for networks with at most
// eight vertices.
std::optional<TemporalLabelling> brute_temporal_labelling(const PhyloNetwork& net);

// The tree pair (T, T') on {1, ..., 2^m + 2} of the h_t versus h_r family.
std::pair<PhyloTree, PhyloTree> gen_theorem_big_trees(int m);

// The one-reticulation temporal tree-child network that rigidly displays
// both generated trees.
PhyloNetwork theorem_big_network(int m);

}  // namespace forkpick
