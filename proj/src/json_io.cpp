#include "forkpick/json_io.hpp"

#include "forkpick/errors.hpp"
#include "forkpick/newick.hpp"

namespace forkpick {

namespace {

const char* role_name(VertexRole r) {
  switch (r) {
    case VertexRole::root: return "root";
    case VertexRole::tree: return "tree";
    case VertexRole::reticulation: return "reticulation";
    case VertexRole::leaf: return "leaf";
    case VertexRole::invalid: return "invalid";
  }
  return "invalid";
}

}  // namespace

std::string to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::optimal: return "optimal";
    case SearchStatus::infeasible: return "infeasible";
    case SearchStatus::unknown: return "unknown";
  }
  return "unknown";
}

Json to_json(const ForkOp& op) {
  return Json{{"kind", op.kind}, {"leaf", op.leaf}, {"w1", op.w1}, {"w2", op.w2}};
}

Json to_json(const ForkPickingSequence& seq) {
  Json ops = Json::array();
  for (const auto& op : seq.ops) ops.push_back(to_json(op));
  Json blocks = Json::array();
  for (const auto& b : seq.blocks)
    blocks.push_back({{"type", b.special ? "S" : "C"}, {"begin", b.begin}, {"end", b.end}});
  return Json{{"weight", seq.weight()}, {"ops", std::move(ops)}, {"blocks", std::move(blocks)}};
}

Json to_json(const CherryPickingSequence& cps) {
  return Json{{"ones", cps.ones()}, {"order", cps.order}, {"counts", cps.counts}};
}

Json to_json(const ClassReport& r) {
  return Json{{"is_valid_network", r.is_valid_network},
              {"is_tree_child", r.is_tree_child},
              {"has_shortcut", r.has_shortcut},
              {"is_normal", r.is_normal},
              {"is_temporal", r.is_temporal},
              {"witness", r.witness ? Json(*r.witness) : Json(nullptr)}};
}

Json to_json(const SearchStats& s) {
  return Json{{"nodes", s.nodes}, {"memo_hits", s.memo_hits}, {"elapsed", s.elapsed_seconds}};
}

Json to_json(const ForkSearchResult& r) {
  Json j{{"status", to_string(r.status)}};
  j["optimum"] = r.status == SearchStatus::optimal ? Json(r.optimum) : Json(nullptr);
  j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  j["stats"] = to_json(r.stats);
  return j;
}

Json to_json(const CherrySearchResult& r) {
  Json j{{"status", to_string(r.status)}};
  j["optimum"] = r.status == SearchStatus::optimal ? Json(r.optimum) : Json(nullptr);
  j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  j["stats"] = to_json(r.stats);
  return j;
}

Json to_json(const PhyloNetwork& net) {
  Json vertices = Json::array();
  Json edges = Json::array();
  for (std::size_t v = 0; v < net.vertex_count(); ++v) {
    const auto id = static_cast<VertexId>(v);
    Json vj{{"id", id}, {"role", role_name(net.role(id))}};
    if (!net.label(id).empty()) vj["label"] = net.label(id);
    vertices.push_back(std::move(vj));
    for (VertexId c : net.children(id)) edges.push_back({id, c});
  }
  return Json{{"enewick", serialize(net)},
              {"h", net.reticulation_count()},
              {"vertices", std::move(vertices)},
              {"edges", std::move(edges)}};
}

Json to_json(const PhyloTree& tree, const PhyloNetwork& net, const DisplayMap& dm) {
  Json vertex_image = Json::array();
  Json edge_image = Json::array();
  for (VertexId v : tree.preorder()) {
    Json vj{{"tree", v}, {"net", dm.vertex_image.at(v)}};
    if (tree.is_leaf(v)) vj["label"] = tree.label(v);
    vertex_image.push_back(std::move(vj));
    if (v != tree.root()) edge_image.push_back({{"head", v}, {"path", dm.edge_image.at(v)}});
  }
  return Json{{"vertex_image", std::move(vertex_image)},
              {"edge_image", std::move(edge_image)},
              {"gamma", gamma_profile(net, dm)}};
}

Json to_json(const HybridCertificate& c, const PhyloTree& t1, const PhyloTree& t2) {
  Json j{{"quantity", to_string(c.quantity)}, {"cap", c.cap}};
  j["value"] = c.value ? Json(*c.value) : Json("> " + std::to_string(c.cap));
  j["mode"] = c.mode.empty() ? Json(nullptr) : Json(c.mode);
  if (c.network) {
    j["network"] = to_json(*c.network);
    j["times"] = c.times ? Json(*c.times) : Json(nullptr);
    if (c.maps) {
      j["map_t1"] = to_json(t1, *c.network, c.maps->first);
      j["map_t2"] = to_json(t2, *c.network, c.maps->second);
      j["gamma"] = gamma_profile(*c.network, c.maps->first, c.maps->second);
    }
  } else {
    j["network"] = nullptr;
  }
  return j;
}

Json to_json(const ConstructionTrace& trace, const PhyloTree& t1, const PhyloTree& t2) {
  Json steps = Json::array();
  for (const auto& s : trace.steps)
    steps.push_back(
        {{"leaf", s.leaf}, {"kind", s.kind}, {"attached_to", s.attached_to}, {"reticulation", s.reticulation}});
  return Json{{"start_leaf", trace.start_leaf},
              {"steps", std::move(steps)},
              {"network", to_json(trace.network)},
              {"times", trace.times},
              {"map_t1", to_json(t1, trace.network, trace.maps.first)},
              {"map_t2", to_json(t2, trace.network, trace.maps.second)}};
}

ForkOp fork_op_from_json(const Json& j) {
  try {
    ForkOp op;
    op.kind = j.at("kind").get<int>();
    op.leaf = j.at("leaf").get<std::string>();
    op.w1 = j.at("w1").get<std::vector<std::string>>();
    op.w2 = j.at("w2").get<std::vector<std::string>>();
    if (op.kind < 0 || op.kind > 3) throw InputError("operation kind must be 0..3");
    return op;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed operation: ") + e.what());
  }
}

ForkPickingSequence fork_sequence_from_json(const Json& j) {
  if (j.is_object() && j.contains("witness") && j.at("witness").is_object())
    return fork_sequence_from_json(j.at("witness"));
  const Json& ops = j.is_array() ? j : j.contains("ops") ? j.at("ops") : j;
  if (!ops.is_array()) throw InputError("expected an array of operations");
  std::vector<ForkOp> out;
  for (const auto& o : ops) out.push_back(fork_op_from_json(o));
  return make_fork_picking_sequence(std::move(out));
}

CherryPickingSequence cherry_sequence_from_json(const Json& j) {
  if (j.is_object() && j.contains("witness") && j.at("witness").is_object())
    return cherry_sequence_from_json(j.at("witness"));
  try {
    CherryPickingSequence cps;
    cps.order = j.at("order").get<std::vector<std::string>>();
    cps.counts = j.at("counts").get<std::vector<int>>();
    return cps;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed cherry-picking sequence: ") + e.what());
  }
}

}  // namespace forkpick
