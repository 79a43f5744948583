#pragma once

#include "json.hpp"

#include "forkpick/construct.hpp"
#include "forkpick/display.hpp"
#include "forkpick/forkops.hpp"
#include "forkpick/model.hpp"
#include "forkpick/netcheck.hpp"
#include "forkpick/oracle.hpp"
#include "forkpick/search.hpp"

namespace forkpick {

using Json = nlohmann::ordered_json;

Json to_json(const ForkOp& op);
Json to_json(const ForkPickingSequence& seq);
Json to_json(const CherryPickingSequence& cps);
Json to_json(const ClassReport& report);
Json to_json(const SearchStats& stats);
Json to_json(const ForkSearchResult& result);
Json to_json(const CherrySearchResult& result);
Json to_json(const PhyloNetwork& net);
Json to_json(const PhyloTree& tree, const PhyloNetwork& net, const DisplayMap& dm);
Json to_json(const HybridCertificate& cert, const PhyloTree& t1, const PhyloTree& t2);
Json to_json(const ConstructionTrace& trace, const PhyloTree& t1, const PhyloTree& t2);

std::string to_string(SearchStatus s);

// Sequences are read back from their ops alone; blocks are recomputed.
// Accepts either {"ops": [...]} / {"order": [...], "counts": [...]} or a
// bare array of ops, or a search result carrying a "witness". Throws InputError on malformed input.
ForkOp fork_op_from_json(const Json& j);
ForkPickingSequence fork_sequence_from_json(const Json& j);
CherryPickingSequence cherry_sequence_from_json(const Json& j);

}  // namespace forkpick
