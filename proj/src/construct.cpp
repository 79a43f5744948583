#include "forkpick/construct.hpp"

#include <algorithm>
#include <set>

#include "forkpick/errors.hpp"

namespace forkpick {

namespace {

VertexId leaf_or_fail(const PhyloNetwork& net, const std::string& label) {
  auto v = net.leaf(label);
  if (!v) throw ConstructionError("leaf " + label + " is not in the network under construction");
  return *v;
}

// Subdivides the edge into `leaf` (or puts a new root above it) and returns
// the new vertex.
VertexId subdivide_above(PhyloNetwork& net, VertexId leaf) {
  const VertexId w = net.add_vertex();
  if (net.parents(leaf).empty()) {
    net.add_edge(w, leaf);
    return w;
  }
  const VertexId u = net.parents(leaf)[0];
  net.remove_edge(u, leaf);
  net.add_edge(u, w);
  net.add_edge(w, leaf);
  return w;
}

void apply_step(PhyloNetwork& net, const InsertionStep& step) {
  if (step.reticulation) {
    const VertexId u1 = subdivide_above(net, leaf_or_fail(net, step.attached_to.at(0)));
    const VertexId u2 = subdivide_above(net, leaf_or_fail(net, step.attached_to.at(1)));
    const VertexId r = net.add_vertex();
    const VertexId x = net.add_vertex(step.leaf);
    net.add_edge(u1, r);
    net.add_edge(u2, r);
    net.add_edge(r, x);
  } else {
    const VertexId w = subdivide_above(net, leaf_or_fail(net, step.attached_to.at(0)));
    net.add_edge(w, net.add_vertex(step.leaf));
  }
}

InsertionStep step_for(const ForkOp& op) {
  InsertionStep s;
  s.leaf = op.leaf;
  s.kind = op.kind;
  switch (op.kind) {
    case 0:
      s.attached_to = {op.w1[1]};
      break;
    case 1:
      s.attached_to = {op.w1[1], op.w2[1]};
      s.reticulation = true;
      break;
    case 2: {
      const auto& fork = op.fork_side() == 1 ? op.w1 : op.w2;
      s.attached_to = {fork[2]};
      break;
    }
    default: {
      const auto& fork = op.fork_side() == 1 ? op.w1 : op.w2;
      s.attached_to = {fork[0]};
      break;
    }
  }
  return s;
}

}  // namespace

PhyloNetwork replay(const ConstructionTrace& trace) {
  PhyloNetwork net;
  net.add_vertex(trace.start_leaf);
  for (const auto& step : trace.steps) apply_step(net, step);
  return net;
}

ConstructionTrace build_network(const PhyloTree& t1, const PhyloTree& t2, const ForkPickingSequence& seq,
                                const SpecialOptions& options) {
  const auto verdict = check_fork_picking_sequence(t1, t2, seq, options);
  if (!verdict) throw InputError("invalid fork-picking sequence: " + verdict.reason);

  std::set<std::string> removed;
  for (const auto& op : seq.ops) removed.insert(op.leaf);
  ConstructionTrace trace;
  for (const auto& l : t1.leaf_labels())
    if (!removed.count(l)) trace.start_leaf = l;

  PhyloNetwork net;
  net.add_vertex(trace.start_leaf);
  for (auto it = seq.ops.rbegin(); it != seq.ops.rend(); ++it) {
    auto step = step_for(*it);
    apply_step(net, step);
    if (!temporal_labelling(net)) throw ConstructionError("no temporal labelling after inserting " + step.leaf);
    trace.steps.push_back(std::move(step));
  }

  const auto report = validate(net);
  if (!report.is_valid_network) throw ConstructionError("constructed graph is not a network: " + *report.witness);
  if (!report.is_tree_child || !report.is_temporal) throw ConstructionError("constructed network is not temporal tree-child");
  if (net.reticulation_count() > seq.weight()) throw ConstructionError("constructed network has too many reticulations");
  auto maps = rigidly_displays(net, t1, t2);
  if (!maps) throw ConstructionError("constructed network does not rigidly display the trees");
  trace.times = *temporal_labelling(net);
  trace.maps = std::move(*maps);
  trace.network = std::move(net);
  return trace;
}

}  // namespace forkpick
