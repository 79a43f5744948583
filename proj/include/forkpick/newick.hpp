#pragma once

#include <string>
#include <string_view>

#include "forkpick/model.hpp"

namespace forkpick {

// Rooted binary Newick. Branch lengths and [comments] are skipped; internal
// labels are ignored. Throws ParseError with the character offset.
PhyloTree parse_tree(std::string_view text);

// Extended Newick: a reticulation appears once as "(subtree)#H<k>" and once
// as a bare "#H<k>". With `strict`, the result must satisfy every network
// invariant (degrees, single root, no parallel edges, unique labels);
// otherwise only the tag structure and acyclicity are enforced.
PhyloNetwork parse_network(std::string_view text, bool strict = true);

// Canonical text; parse(serialize(x)) is isomorphic to x.
std::string serialize(const PhyloTree& tree);
std::string serialize(const PhyloNetwork& net);

// Reads a whole file. Throws InputError when it cannot be opened.
std::string read_text_file(const std::string& path);

}  // namespace forkpick
