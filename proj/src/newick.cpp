#include "forkpick/newick.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "forkpick/errors.hpp"
#include "forkpick/netcheck.hpp"

namespace forkpick {

namespace {

struct RawNode {
  std::vector<int> children;
  std::string label;
  std::string tag;
  bool has_group = false;  // "(...)" was present
  std::size_t offset = 0;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  // Parses one statement; returns the index of the top node.
  int parse() {
    skip();
    const int top = subtree();
    skip();
    if (!eat(';')) fail("expected ';'");
    skip();
    if (pos_ != text_.size()) fail("trailing characters after ';'");
    return top;
  }

  std::vector<RawNode> nodes;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

 private:
  int subtree() {
    skip();
    RawNode node;
    node.offset = pos_;
    if (eat('(')) {
      node.has_group = true;
      while (true) {
        node.children.push_back(subtree());
        skip();
        if (eat(',')) continue;
        if (eat(')')) break;
        fail("expected ',' or ')'");
      }
    }
    skip();
    node.label = token();
    skip();
    if (peek() == '#') {
      ++pos_;
      node.tag = "#" + token();
      if (node.tag.size() == 1) fail("empty reticulation tag");
      skip();
    }
    if (eat(':')) {
      skip();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                     std::string_view("+-.eE").find(text_[pos_]) != std::string_view::npos))
        ++pos_;
      if (pos_ == start) fail("expected branch length");
    }
    if (!node.has_group && node.label.empty() && node.tag.empty()) fail("expected subtree");
    nodes.push_back(std::move(node));
    return static_cast<int>(nodes.size() - 1);
  }

  std::string token() {
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        ++pos_;
      } else {
        break;
      }
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '[') {
        const auto close = text_.find(']', pos_);
        if (close == std::string_view::npos) fail("unterminated comment");
        pos_ = close + 1;
      } else {
        break;
      }
    }
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  bool eat(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

PhyloTree parse_tree(std::string_view text) {
  Reader r(text);
  const int top = r.parse();
  const auto& nodes = r.nodes;
  std::vector<PhyloTree::Children> ch(nodes.size(), {kNoVertex, kNoVertex});
  std::vector<std::string> labels(nodes.size());
  std::set<std::string> seen;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (!n.tag.empty()) throw ParseError("reticulation tag in a tree", n.offset);
    if (n.has_group) {
      if (n.children.size() != 2)
        throw ParseError("non-binary vertex with " + std::to_string(n.children.size()) + " children", n.offset);
      ch[i] = {n.children[0], n.children[1]};
    } else {
      if (!seen.insert(n.label).second) throw ParseError("duplicate leaf label '" + n.label + "'", n.offset);
      labels[i] = n.label;
    }
  }
  try {
    return PhyloTree(std::move(ch), std::move(labels), top);
  } catch (const ParseError&) {
    throw;
  } catch (const InputError& e) {
    throw ParseError(e.what(), 0);
  }
}

PhyloNetwork parse_network(std::string_view text, bool strict) {
  Reader r(text);
  const int top = r.parse();
  const auto& nodes = r.nodes;

  // Each tag names one vertex; exactly one occurrence carries its content.
  std::map<std::string, std::vector<int>> occurrences;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (!nodes[i].tag.empty()) occurrences[nodes[i].tag].push_back(static_cast<int>(i));

  std::vector<VertexId> vertex_of(nodes.size(), kNoVertex);
  PhyloNetwork net;
  for (const auto& [tag, occ] : occurrences) {
    if (occ.size() != 2)
      throw ParseError("tag " + tag + " occurs " + std::to_string(occ.size()) + " times", nodes[occ.back()].offset);
    int defining = -1;
    for (int i : occ) {
      const bool content = nodes[i].has_group || !nodes[i].label.empty();
      if (content) {
        if (defining != -1) throw ParseError("tag " + tag + " defined twice", nodes[i].offset);
        defining = i;
      }
    }
    if (defining == -1) throw ParseError("tag " + tag + " never defined", nodes[occ[0]].offset);
    const VertexId v = net.add_vertex(nodes[defining].has_group ? std::string() : nodes[defining].label);
    for (int i : occ) vertex_of[i] = v;
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (vertex_of[i] != kNoVertex) continue;
    vertex_of[i] = net.add_vertex(nodes[i].has_group ? std::string() : nodes[i].label);
  }
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (int c : nodes[i].children) net.add_edge(vertex_of[i], vertex_of[c]);

  if (!topological_order(net)) throw ParseError("reticulation tags induce a cycle", text.size());
  if (net.root() != vertex_of[top]) throw ParseError("top-level subtree is not the unique root", text.size());
  if (strict) {
    const auto report = validate(net);
    if (!report.is_valid_network) throw ParseError("not a phylogenetic network: " + report.witness.value_or(""), text.size());
  }
  return net;
}

std::string serialize(const PhyloTree& tree) { return canonical_form(tree).text; }

std::string serialize(const PhyloNetwork& net) { return canonical_form(net).text; }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace forkpick
