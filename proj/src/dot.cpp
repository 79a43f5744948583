#include "forkpick/dot.hpp"

#include <map>
#include <sstream>

namespace forkpick {

std::string to_dot(const PhyloNetwork& net) {
  const auto times = temporal_labelling(net);
  std::ostringstream out;
  out << "digraph N {\n  node [shape=circle, width=0.25, label=\"\"];\n";
  for (std::size_t i = 0; i < net.vertex_count(); ++i) {
    const auto v = static_cast<VertexId>(i);
    std::string label = net.label(v);
    if (times) label += (label.empty() ? "" : "\\n") + std::string("t=") + std::to_string((*times)[v]);
    out << "  v" << v << " [";
    switch (net.role(v)) {
      case VertexRole::leaf: out << "shape=box, "; break;
      case VertexRole::reticulation: out << "style=filled, fillcolor=red, "; break;
      case VertexRole::root: out << "shape=doublecircle, "; break;
      default: break;
    }
    out << "label=\"" << label << "\"];\n";
  }
  for (std::size_t i = 0; i < net.vertex_count(); ++i) {
    const auto v = static_cast<VertexId>(i);
    for (VertexId c : net.children(v)) {
      out << "  v" << v << " -> v" << c;
      if (net.role(c) == VertexRole::reticulation) out << " [color=red]";
      out << ";\n";
    }
  }
  if (times) {
    std::map<int, std::vector<VertexId>> levels;
    for (std::size_t i = 0; i < times->size(); ++i) levels[(*times)[i]].push_back(static_cast<VertexId>(i));
    for (const auto& [t, vs] : levels) {
      if (vs.size() < 2) continue;
      out << "  { rank=same;";
      for (VertexId v : vs) out << " v" << v << ";";
      out << " }\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string to_dot(const PhyloTree& tree) { return to_dot(PhyloNetwork::from_tree(tree)); }

}  // namespace forkpick
