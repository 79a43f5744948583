#include "forkpick/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "forkpick/construct.hpp"
#include "forkpick/dot.hpp"
#include "forkpick/errors.hpp"
#include "forkpick/json_io.hpp"
#include "forkpick/newick.hpp"
#include "forkpick/oracle.hpp"
#include "forkpick/search.hpp"

namespace forkpick::cli {

namespace {

PhyloTree load_tree(const std::string& path) { return parse_tree(read_text_file(path)); }
PhyloNetwork load_network(const std::string& path) { return parse_network(read_text_file(path)); }

Json load_json(const std::string& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

LcaRule parse_rule(const std::string& s) { return s == "relaxed" ? LcaRule::relaxed : LcaRule::nested; }

int status_code(SearchStatus s) {
  switch (s) {
    case SearchStatus::optimal: return kTrue;
    case SearchStatus::infeasible: return kFalse;
    case SearchStatus::unknown: return kUnknown;
  }
  return kUnknown;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

struct Options {
  // shared
  int jobs = 1;
  std::string lca_rule = "nested";
  // validate / dot
  std::string net_path;
  std::string any_path;
  // check
  bool weak = false, display = false, rigid = false;
  std::vector<std::string> files;
  // hybrid
  bool temporal = false;
  bool brute = false;
  int cap = -1;
  double timeout = 0.0;
  // sequence
  std::string mode = "fork";
  std::string check_path;
  // construct
  std::string seq_path;
  std::string enwk_out;
  // gen-thmbig
  int m = 0;
  // enumerate
  std::string what = "trees";
  int n = 4;
  int h = 0;
  std::string net_class = "general";
  bool count_only = false;
};

SearchOptions search_options(const Options& o) {
  SearchOptions so;
  so.node_limit = default_node_limit();
  so.time_limit_seconds = o.timeout;
  so.special.lca_rule = parse_rule(o.lca_rule);
  return so;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const auto net = parse_network(read_text_file(o.net_path), false);
  const auto report = validate(net);
  Json j = to_json(report);
  j["h"] = net.reticulation_count();
  j["leaves"] = net.leaf_labels();
  if (report.is_valid_network) {
    const auto times = temporal_labelling(net);
    j["times"] = times ? Json(*times) : Json(nullptr);
    j["enewick"] = serialize(net);
  }
  emit(out, j);
  return report.is_valid_network ? kTrue : kFalse;
}

int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  const int modes = int(o.weak) + int(o.display) + int(o.rigid);
  if (modes != 1) {
    err << "check needs exactly one of --weak, --display, --rigid\n";
    return kInputError;
  }
  if (o.rigid) {
    if (o.files.size() != 3) {
      err << "check --rigid T1 T2 NET\n";
      return kInputError;
    }
    const auto t1 = load_tree(o.files[0]), t2 = load_tree(o.files[1]);
    const auto net = load_network(o.files[2]);
    const auto pair = rigidly_displays(net, t1, t2);
    Json j{{"mode", "rigid"}, {"result", pair.has_value()}};
    if (pair) {
      j["map_t1"] = to_json(t1, net, pair->first);
      j["map_t2"] = to_json(t2, net, pair->second);
      j["gamma"] = gamma_profile(net, pair->first, pair->second);
    }
    emit(out, j);
    return pair ? kTrue : kFalse;
  }
  if (o.files.size() != 2) {
    err << "check --weak|--display TREE NET\n";
    return kInputError;
  }
  const auto tree = load_tree(o.files[0]);
  const auto net = load_network(o.files[1]);
  if (tree.leaf_labels() != net.leaf_labels()) throw InputError("tree and network have different leaf sets");
  Json j{{"mode", o.weak ? "weak" : "display"}};
  std::optional<DisplayMap> map;
  if (o.weak) {
    auto found = find_display_maps(tree, net, 1);
    if (!found.maps.empty()) map = found.maps.front();
  } else {
    if (displays(tree, net)) map = find_disjoint_display_map(tree, net);
  }
  j["result"] = map.has_value();
  if (map) j["map"] = to_json(tree, net, *map);
  emit(out, j);
  return map ? kTrue : kFalse;
}

int cmd_hybrid(const Options& o, std::ostream& out, std::ostream& err) {
  const int modes = int(o.weak) + int(o.temporal) + int(o.rigid);
  if (modes != 1 || o.files.size() != 2) {
    err << "hybrid {--rigid|--temporal|--weak} T1 T2 [--cap K] [--timeout S]\n";
    return kInputError;
  }
  const auto t1 = load_tree(o.files[0]), t2 = load_tree(o.files[1]);
  if (t1.leaf_labels() != t2.leaf_labels()) throw InputError("the two trees have different leaf sets");
  if (o.weak || o.brute) {
    const Quantity q = o.weak ? Quantity::h_wd : o.rigid ? Quantity::h_r : Quantity::h_t;
    const int default_cap = q == Quantity::h_wd ? 2 : 3;
    const int cap = o.cap < 0 ? default_cap : o.cap;
    if (cap > default_cap)
      err << "warning: cap " << cap << " exceeds the default " << default_cap
          << "; enumeration cost grows steeply with each level\n";
    const auto cert = brute_hybrid(t1, t2, q, cap, o.timeout);
    Json j = to_json(cert, t1, t2);
    j["optimum"] = cert.value ? Json(*cert.value) : Json(nullptr);
    j["timed_out"] = cert.timed_out;
    emit(out, j);
    if (cert.timed_out) return kUnknown;
    return cert.value ? kTrue : kUnknown;
  }
  const auto so = search_options(o);
  if (o.rigid) {
    const auto r = min_weight_fork_picking(t1, t2, so);
    Json j{{"quantity", "h_r"}};
    j.update(to_json(r));
    emit(out, j);
    return status_code(r.status);
  }
  const auto r = min_weight_cherry_picking(t1, t2, so);
  Json j{{"quantity", "h_t"}};
  j.update(to_json(r));
  emit(out, j);
  return status_code(r.status);
}

int cmd_sequence(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.files.size() != 2 || (o.mode != "fork" && o.mode != "cherry")) {
    err << "sequence T1 T2 [--mode fork|cherry] [--check FILE]\n";
    return kInputError;
  }
  const auto t1 = load_tree(o.files[0]), t2 = load_tree(o.files[1]);
  const auto so = search_options(o);
  if (!o.check_path.empty()) {
    const auto j = load_json(o.check_path);
    Verdict v;
    Json res{{"mode", o.mode}};
    if (o.mode == "fork") {
      const auto seq = fork_sequence_from_json(j);
      v = check_fork_picking_sequence(t1, t2, seq, so.special);
      res["weight"] = seq.weight();
    } else {
      const auto cps = cherry_sequence_from_json(j);
      v = check_cherry_picking_sequence(t1, t2, cps);
      res["ones"] = cps.ones();
    }
    res["valid"] = v.ok;
    res["reason"] = v.ok ? Json(nullptr) : Json(v.reason);
    emit(out, res);
    return v.ok ? kTrue : kFalse;
  }
  if (o.mode == "fork") {
    const auto r = min_weight_fork_picking(t1, t2, so);
    Json j{{"mode", "fork"}};
    j.update(to_json(r));
    if (r.witness) j["cherry_form"] = to_json(fork_to_cherry(*r.witness));
    emit(out, j);
    return status_code(r.status);
  }
  const auto r = min_weight_cherry_picking(t1, t2, so);
  Json j{{"mode", "cherry"}};
  j.update(to_json(r));
  emit(out, j);
  return status_code(r.status);
}

int cmd_construct(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.files.size() != 2 || o.seq_path.empty()) {
    err << "construct T1 T2 --seq FILE [--enwk OUT]\n";
    return kInputError;
  }
  const auto t1 = load_tree(o.files[0]), t2 = load_tree(o.files[1]);
  const auto seq = fork_sequence_from_json(load_json(o.seq_path));
  SpecialOptions sp;
  sp.lca_rule = parse_rule(o.lca_rule);
  const auto trace = build_network(t1, t2, seq, sp);
  if (!o.enwk_out.empty()) {
    std::ofstream f(o.enwk_out);
    if (!f) throw InputError("cannot write '" + o.enwk_out + "'");
    f << serialize(trace.network) << "\n";
  }
  Json j = to_json(trace, t1, t2);
  j["weight"] = seq.weight();
  emit(out, j);
  return kTrue;
}

int cmd_extract(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.files.size() != 3) {
    err << "extract NET T1 T2\n";
    return kInputError;
  }
  const auto net = load_network(o.files[0]);
  const auto t1 = load_tree(o.files[1]), t2 = load_tree(o.files[2]);
  SpecialOptions sp;
  sp.lca_rule = parse_rule(o.lca_rule);
  const auto seq = extract_fork_picking(net, t1, t2, std::nullopt, sp);
  Json j = to_json(seq);
  j["h"] = net.reticulation_count();
  emit(out, j);
  return kTrue;
}

int cmd_gen(const Options& o, std::ostream& out, std::ostream& err) {
  const auto [t, tp] = gen_theorem_big_trees(o.m);
  const auto net = theorem_big_network(o.m);
  Json j{{"m", o.m}, {"leaves", t.leaf_count()}, {"t", serialize(t)}, {"t_prime", serialize(tp)}, {"network", serialize(net)}};
  if (o.m <= 4) {
    j["witness"] = to_json(extract_fork_picking(net, t, tp));
  } else {
    err << "note: witness extraction skipped for m > 4 (minutes of special-sequence enumeration)\n";
    j["witness"] = nullptr;
  }
  emit(out, j);
  return kTrue;
}

int cmd_dot(const Options& o, std::ostream& out) {
  const auto text = read_text_file(o.any_path);
  try {
    out << to_dot(parse_tree(text));
  } catch (const ParseError&) {
    out << to_dot(parse_network(text));
  }
  return kTrue;
}

int cmd_enumerate(const Options& o, std::ostream& out, std::ostream& err) {
  const auto taxa = letter_taxa(o.n);
  if (o.what == "trees") {
    const auto trees = enumerate_trees(taxa);
    if (o.count_only) {
      out << trees.size() << "\n";
    } else {
      for (const auto& t : trees) out << serialize(t) << "\n";
    }
    return kTrue;
  }
  if (o.what != "networks") {
    err << "enumerate {trees|networks}\n";
    return kInputError;
  }
  NetworkClass cls = NetworkClass::general;
  if (o.net_class == "tree-child") cls = NetworkClass::tree_child;
  else if (o.net_class == "temporal-tree-child") cls = NetworkClass::temporal_tree_child;
  else if (o.net_class != "general") throw InputError("unknown class '" + o.net_class + "'");
  const auto nets = enumerate_networks(taxa, o.h, cls);
  if (o.count_only) {
    out << nets.size() << "\n";
  } else {
    for (const auto& n : nets) out << serialize(n) << "\n";
  }
  return kTrue;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trees displayed by phylogenetic networks: checks, hybrid numbers, sequences", "forkpick"};
  app.require_subcommand(1, 1);
  Options o;
  app.add_option("--jobs", o.jobs, "worker threads (solvers run sequentially)")->check(CLI::PositiveNumber);

  auto* validate_cmd = app.add_subcommand("validate", "class report for an extended Newick network");
  validate_cmd->add_option("NET", o.net_path)->required();

  auto* check = app.add_subcommand("check", "display predicates");
  check->add_flag("--weak", o.weak);
  check->add_flag("--display", o.display);
  check->add_flag("--rigid", o.rigid);
  check->add_option("FILES", o.files)->required();

  auto* hybrid = app.add_subcommand("hybrid", "h_r, h_t or h_wd");
  hybrid->add_flag("--rigid", o.rigid);
  hybrid->add_flag("--temporal", o.temporal);
  hybrid->add_flag("--weak", o.weak);
  hybrid->add_flag("--brute", o.brute, "use network enumeration for --rigid/--temporal");
  hybrid->add_option("--cap", o.cap)->check(CLI::NonNegativeNumber);
  hybrid->add_option("--timeout", o.timeout)->check(CLI::NonNegativeNumber);
  hybrid->add_option("--lca-rule", o.lca_rule)->check(CLI::IsMember({"nested", "relaxed"}));
  hybrid->add_option("FILES", o.files)->required();

  auto* sequence = app.add_subcommand("sequence", "optimal or checked fork/cherry-picking sequence");
  sequence->add_option("--mode", o.mode)->check(CLI::IsMember({"fork", "cherry"}));
  sequence->add_option("--check", o.check_path, "validate the sequence in this JSON file");
  sequence->add_option("--timeout", o.timeout)->check(CLI::NonNegativeNumber);
  sequence->add_option("--lca-rule", o.lca_rule)->check(CLI::IsMember({"nested", "relaxed"}));
  sequence->add_option("FILES", o.files)->required();

  auto* construct = app.add_subcommand("construct", "network from a fork-picking sequence");
  construct->add_option("--seq", o.seq_path)->required();
  construct->add_option("--enwk", o.enwk_out, "also write the network here");
  construct->add_option("--lca-rule", o.lca_rule)->check(CLI::IsMember({"nested", "relaxed"}));
  construct->add_option("FILES", o.files)->required();

  auto* extract = app.add_subcommand("extract", "fork-picking sequence from a network");
  extract->add_option("--lca-rule", o.lca_rule)->check(CLI::IsMember({"nested", "relaxed"}));
  extract->add_option("FILES", o.files)->required();

  auto* gen = app.add_subcommand("gen-thmbig", "the h_t versus h_r tree family");
  gen->add_option("--m", o.m)->required();

  auto* dot = app.add_subcommand("dot", "Graphviz export of a tree or network");
  dot->add_option("FILE", o.any_path)->required();

  auto* enumerate = app.add_subcommand("enumerate", "trees or networks on a, b, c, ...");
  enumerate->add_option("WHAT", o.what)->check(CLI::IsMember({"trees", "networks"}));
  enumerate->add_option("--n", o.n)->check(CLI::Range(2, 7));
  enumerate->add_option("--reticulations", o.h)->check(CLI::Range(0, 3));
  enumerate->add_option("--class", o.net_class)
      ->check(CLI::IsMember({"general", "tree-child", "temporal-tree-child"}));
  enumerate->add_flag("--count-only", o.count_only);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kTrue;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kInputError;
  }

  try {
    if (*validate_cmd) return cmd_validate(o, out);
    if (*check) return cmd_check(o, out, err);
    if (*hybrid) return cmd_hybrid(o, out, err);
    if (*sequence) return cmd_sequence(o, out, err);
    if (*construct) return cmd_construct(o, out, err);
    if (*extract) return cmd_extract(o, out, err);
    if (*gen) return cmd_gen(o, out, err);
    if (*dot) return cmd_dot(o, out);
    if (*enumerate) return cmd_enumerate(o, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace forkpick::cli
