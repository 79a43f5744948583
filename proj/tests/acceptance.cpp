#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "support.hpp"

using namespace forkpick;
using namespace forkpick::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Report {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      out_.pass = false;
      failures_.push_back(what);
    }
  }
  void note(const std::string& s) { notes_.push_back(s); }
  Outcome finish() {
    std::ostringstream os;
    for (std::size_t i = 0; i < notes_.size(); ++i) os << (i ? "; " : "") << notes_[i];
    for (const auto& f : failures_) os << "; FAILED: " << f;
    out_.detail = os.str();
    return out_;
  }

 private:
  Outcome out_;
  std::vector<std::string> notes_;
  std::vector<std::string> failures_;
};

template <class T>
std::string str(const T& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

Outcome fig5() {
  Report r;
  const auto t = data_tree("fig5_t1.nwk");
  const auto tp = data_tree("fig5_t2.nwk");
  const auto res = min_weight_fork_picking(t, tp);
  r.expect(res.status == SearchStatus::optimal && res.optimum == 1, "s_r = 1");
  r.note("s_r=" + str(res.optimum));
  if (!res.witness) return r.finish();
  const auto trace = build_network(t, tp, *res.witness);
  const auto& n = trace.network;
  r.expect(is_temporal_tree_child(n), "N_sigma temporal tree-child");
  r.expect(n.reticulation_count() == 1, "h(N_sigma) = 1");
  const auto pair = rigidly_displays(n, t, tp);
  r.expect(pair.has_value(), "N_sigma rigidly displays both");
  r.expect(canonical_form(n) == canonical_form(data_net("fig5_net.enwk")), "N_sigma is the stored Fig 5 network");
  r.note("N " + serialize(n));
  const auto back = extract_fork_picking(n, t, tp, pair);
  r.expect(back.weight() == 1, "extraction weight 1");
  r.note("extracted weight=" + str(back.weight()));
  const auto brute = brute_hybrid(t, tp, Quantity::h_r, 2);
  r.expect(brute.value == 1, "brute h_r = 1");
  return r.finish();
}

Outcome fig2() {
  Report r;
  const auto t = data_tree("fig2_t1.nwk");
  const auto tp = data_tree("fig2_t2.nwk");
  r.expect(t.leaf_count() == 6, "|X| = 6");
  const auto cert = brute_hybrid(t, tp, Quantity::h_wd, 2);
  r.expect(!cert.timed_out, "no timeout");
  r.expect(cert.value == 2, "h_wd = 2");
  r.expect(verify_certificate(cert, t, tp), "certificate verifies");
  r.note("h_wd=" + (cert.value ? str(*cert.value) : std::string("> 2")));
  if (cert.network) r.note("witness " + serialize(*cert.network));
  return r.finish();
}

Outcome fig6() {
  Report r;
  const auto t = data_tree("fig6_t1.nwk");
  const auto tp = data_tree("fig6_t2.nwk");
  const auto wd = brute_hybrid(t, tp, Quantity::h_wd, 2);
  const auto hr = brute_hybrid(t, tp, Quantity::h_r, 3);
  const auto sr = min_weight_fork_picking(t, tp);
  r.expect(wd.value == 1, "h_wd = 1");
  r.expect(hr.value == 2, "h_r = 2");
  r.expect(sr.status == SearchStatus::optimal && sr.optimum == 2, "s_r = 2");
  r.expect(verify_certificate(wd, t, tp) && verify_certificate(hr, t, tp), "certificates verify");
  r.expect(rigidly_displays(data_net("fig6_net_rigid.enwk"), t, tp).has_value(), "stored N' rigidly displays");
  r.expect(weakly_displays(t, data_net("fig6_net_weak.enwk")) && weakly_displays(tp, data_net("fig6_net_weak.enwk")),
           "stored N weakly displays");
  r.note("h_wd=" + str(wd.value.value_or(-1)) + " h_r=" + str(hr.value.value_or(-1)) + " s_r=" + str(sr.optimum));
  return r.finish();
}

Outcome theorem_family() {
  Report r;
  const auto [t, tp] = gen_theorem_big_trees(4);
  r.expect(t.leaf_count() == 18, "|X| = 18");
  r.expect(serialize(t) == serialize(data_tree("thm_m4_t.nwk")) &&
               serialize(tp) == serialize(data_tree("thm_m4_tprime.nwk")),
           "matches the stored transcription");
  const auto cherry = min_weight_cherry_picking(t, tp);
  r.expect(cherry.status == SearchStatus::optimal, "cherry DP finishes");
  r.expect(cherry.optimum >= 3, "cherry optimum >= 3");
  r.note("cherry optimum=" + str(cherry.optimum) + " (" + str(cherry.stats.nodes) + " states)");
  if (cherry.witness) r.expect(check_cherry_picking_sequence(t, tp, *cherry.witness).ok, "cherry witness validates");

  const auto net = theorem_big_network(4);
  const auto pair = rigidly_displays(net, t, tp);
  r.expect(pair.has_value() && is_temporal_tree_child(net) && net.reticulation_count() == 1,
           "one-reticulation witness network rigidly displays both");
  const auto seq = extract_fork_picking(net, t, tp, pair);
  r.expect(seq.weight() == 1 && check_fork_picking_sequence(t, tp, seq).ok, "weight-1 fork-picking witness");
  r.expect(!isomorphic(t, tp), "trees are not isomorphic");
  r.note("s_r=1 (witness weight " + str(seq.weight()) + ", non-isomorphic)");
  r.note("h_t - h_r >= " + str(cherry.optimum - 1));
  return r.finish();
}

Outcome predicates() {
  Report r;
  const auto n1 = data_net("fig1_net.enwk");
  const auto t1 = data_tree("fig1_t1.nwk");
  const auto tp1 = data_tree("fig1_t2.nwk");
  r.expect(weakly_displays(t1, n1) && weakly_displays(tp1, n1), "Fig 1 weak display of both");
  r.expect(!displays(tp1, n1), "Fig 1 T' not displayed");
  const auto n3 = data_net("fig3_net.enwk");
  const auto t3 = data_tree("fig3_t1.nwk");
  const auto tp3 = data_tree("fig3_t2.nwk");
  r.expect(weakly_displays(t3, n3) && weakly_displays(tp3, n3), "Fig 3 weak display of both");
  r.expect(!rigidly_displays(n3, t3, tp3), "Fig 3 no rigid display");
  r.note("Fig 1 weak=(" + str(weakly_displays(t1, n1)) + "," + str(weakly_displays(tp1, n1)) +
         ") displays(T',N)=" + str(displays(tp1, n1)) + "; Fig 3 rigid=" + str(rigidly_displays(n3, t3, tp3).has_value()));
  return r.finish();
}

// ---------------------------------------------------------------------------
// property suite

constexpr int kCap = 3;

struct PairFacts {
  int h_r = -1;  // least level with a rigid witness, -1 above the cap
  int h_t = -1;  // least level with a network displaying both
};

class Census {
 public:
  Census(std::vector<PhyloTree> trees, std::vector<std::pair<int, int>> pairs, std::vector<std::string> taxa)
      : trees_(std::move(trees)), pairs_(std::move(pairs)), facts_(pairs_.size()), taxa_(std::move(taxa)) {}

  // Visits every rigid witness (network, pair index, maps) found.
  void run(const std::function<void(const PhyloNetwork&, std::size_t, const MapPair&)>& on_rigid,
           const std::function<void(const PhyloNetwork&, std::size_t)>& on_display) {
    NetworkEnumerator e(taxa_, NetworkClass::temporal_tree_child);
    for (int h = 0; h <= kCap; ++h) {
      for (const auto& n : e.level(h)) {
        std::vector<char> weak(trees_.size()), disp(trees_.size());
        for (std::size_t i = 0; i < trees_.size(); ++i) {
          weak[i] = weakly_displays(trees_[i], n);
          disp[i] = weak[i] && displays(trees_[i], n);
        }
        for (std::size_t p = 0; p < pairs_.size(); ++p) {
          const auto [a, b] = pairs_[p];
          if (!weak[a] || !weak[b]) continue;
          auto& f = facts_[p];
          if (disp[a] && disp[b] && f.h_t < 0) {
            f.h_t = h;
            on_display(n, p);
          }
          if (f.h_r >= 0) continue;
          if (const auto maps = rigidly_displays(n, trees_[a], trees_[b])) {
            f.h_r = h;
            on_rigid(n, p, *maps);
          }
        }
      }
    }
  }

  const std::vector<PairFacts>& facts() const { return facts_; }

 private:
  std::vector<PhyloTree> trees_;
  std::vector<std::pair<int, int>> pairs_;
  std::vector<PairFacts> facts_;
  std::vector<std::string> taxa_;
};

struct Tally {
  std::size_t pairs = 0, feasible = 0, constructed = 0, witnesses = 0;
  std::size_t violations[5] = {0, 0, 0, 0, 0};
  std::size_t cherry_lt = 0, cherry_eq = 0, cherry_gt = 0;
  std::size_t cherry_is_ht = 0;
  std::vector<std::string> examples;

  void violate(int part, const std::string& what) {
    ++violations[part];
    if (examples.size() < 8) examples.push_back(std::string(1, char('a' + part)) + ": " + what);
  }
};

void property_scan(int n, const std::vector<std::pair<int, int>>& pairs, Tally& tally) {
  const auto taxa = letter_taxa(n);
  const auto trees = enumerate_trees(taxa);
  Census census(trees, pairs, taxa);
  auto check_rigid = [&](const PhyloNetwork& net, const PhyloTree& a, const PhyloTree& b, const MapPair& maps,
                         const std::string& where) {
    ++tally.witnesses;
    const auto v = rigid_witness_violation(net, a, b, maps);
    if (!v.empty()) tally.violate(3, where + " " + v + " " + serialize(net));
    const auto c = display_clauses(net, a, b);
    if (c.both_displayed != c.two_at_reticulations || c.both_displayed != c.two_off_root)
      tally.violate(3, where + " display clauses disagree " + serialize(net));
  };
  census.run(
      [&](const PhyloNetwork& net, std::size_t p, const MapPair& maps) {
        check_rigid(net, trees[pairs[p].first], trees[pairs[p].second], maps, "census");
      },
      [&](const PhyloNetwork& net, std::size_t p) {
        for (const auto* t : {&trees[pairs[p].first], &trees[pairs[p].second]}) {
          const auto dm = find_disjoint_display_map(*t, net);
          if (!dm || !gamma_within(net, gamma_profile(net, *dm), 0, 1) || !root_maps_to_root(*t, net, *dm))
            tally.violate(3, "display map with gamma <= 1 " + serialize(net));
        }
      });

  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& a = trees[pairs[p].first];
    const auto& b = trees[pairs[p].second];
    const auto& f = census.facts()[p];
    const std::string tag = serialize(a) + " " + serialize(b);
    ++tally.pairs;

    const auto fork = min_weight_fork_picking(a, b);
    const auto cherry = min_weight_cherry_picking(a, b);
    if (fork.status == SearchStatus::unknown || cherry.status == SearchStatus::unknown) {
      tally.violate(0, "solver hit a limit on " + tag);
      continue;
    }
    const bool rigid = f.h_r >= 0, disp = f.h_t >= 0;
    const bool has_cherry = cherry.status == SearchStatus::optimal;
    const bool has_fork = fork.status == SearchStatus::optimal;
    if (!(rigid == disp && disp == has_cherry && has_cherry == has_fork))
      tally.violate(0, tag + " rigid=" + str(rigid) + " display=" + str(disp) + " cherry=" + str(has_cherry) +
                           " fork=" + str(has_fork));
    if (decide_rigidly_displayable(a, b) != has_fork) tally.violate(0, tag + " decide_rigidly_displayable");
    if (!has_fork) continue;
    ++tally.feasible;

    if (fork.optimum != f.h_r) tally.violate(1, tag + " s_r=" + str(fork.optimum) + " h_r=" + str(f.h_r));
    if (cherry.optimum < fork.optimum) ++tally.cherry_lt;
    else if (cherry.optimum == fork.optimum) ++tally.cherry_eq;
    else ++tally.cherry_gt;
    if (cherry.optimum == f.h_t) ++tally.cherry_is_ht;

    const auto trace = build_network(a, b, *fork.witness);
    ++tally.constructed;
    const auto& net = trace.network;
    if (net.reticulation_count() > fork.witness->weight())
      tally.violate(2, tag + " h(N_sigma) > w(sigma)");
    if (!is_temporal_tree_child(net)) tally.violate(2, tag + " N_sigma not temporal tree-child");
    const auto back = extract_fork_picking(net, a, b, trace.maps);
    if (back.weight() > net.reticulation_count()) tally.violate(2, tag + " extraction weight > h(N)");
    check_rigid(net, a, b, trace.maps, "construction");
    if (const auto own = rigidly_displays(net, a, b)) check_rigid(net, a, b, *own, "construction search");
  }
}

Outcome properties(int slice) {
  Report r;
  Tally tally;
  std::vector<std::pair<int, int>> all4;
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j) all4.emplace_back(i, j);
  property_scan(4, all4, tally);

  // every 11th ordered pair of the 105 x 105 trees on five leaves
  std::vector<std::pair<int, int>> five;
  for (int k = 0; k < slice; ++k) five.emplace_back(k * 11 / 105, k * 11 % 105);
  property_scan(5, five, tally);

  for (int k = 3; k <= 7; ++k)
    for (const auto& t : enumerate_trees(letter_taxa(k)))
      if (!has_small_fork(t)) tally.violate(4, serialize(t) + " has no 3-fork or 4-fork");

  for (int p = 0; p < 5; ++p) r.expect(tally.violations[p] == 0, "(" + std::string(1, char('a' + p)) + ") " + str(tally.violations[p]) + " violations");
  r.note(str(tally.pairs) + " pairs (" + str(all4.size()) + " at |X|=4, " + str(five.size()) + " at |X|=5), " +
         str(tally.feasible) + " feasible, " + str(tally.constructed) + " networks built, " + str(tally.witnesses) +
         " rigid witnesses checked");
  r.note("violations a..e = " + str(tally.violations[0]) + "," + str(tally.violations[1]) + "," +
         str(tally.violations[2]) + "," + str(tally.violations[3]) + "," + str(tally.violations[4]));
  r.note("cherry optimum vs s_r: < " + str(tally.cherry_lt) + ", = " + str(tally.cherry_eq) + ", > " +
         str(tally.cherry_gt) + "; cherry optimum = census h_t on " + str(tally.cherry_is_ht) + "/" +
         str(tally.feasible));
  for (const auto& e : tally.examples) r.note(e);
  return r.finish();
}

Outcome round_trips() {
  Report r;
  const std::size_t expect[] = {0, 0, 1, 3, 15, 105, 945, 10395};
  std::size_t trees = 0, nets = 0;
  for (int n = 2; n <= 7; ++n) {
    const auto all = enumerate_trees(letter_taxa(n));
    r.expect(all.size() == expect[n], "(2n-3)!! trees for n=" + str(n));
    std::set<std::string> seen;
    for (const auto& t : all) seen.insert(canonical_form(t).text);
    r.expect(seen.size() == all.size(), "distinct trees for n=" + str(n));
    if (n > 5) continue;
    for (const auto& t : all) {
      const auto text = serialize(t);
      const auto back = parse_tree(text);
      r.expect(isomorphic(back, t) && serialize(back) == text, "tree round trip " + text);
      ++trees;
    }
  }
  for (int n = 2; n <= 4; ++n)
    for (int h = 0; h <= 2; ++h)
      for (const auto& net : enumerate_networks(letter_taxa(n), h, NetworkClass::tree_child)) {
        const auto text = serialize(net);
        const auto back = parse_network(text);
        r.expect(canonical_form(back) == canonical_form(net) && serialize(back) == text, "network round trip " + text);
        ++nets;
      }
  r.note(str(trees) + " trees and " + str(nets) + " tree-child networks round-tripped; counts 1,3,15,105,945,10395");
  return r.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria 1-7"};
  std::vector<int> only;
  int slice = 1000;
  app.add_option("--only", only, "run only these criteria");
  app.add_option("--slice", slice, "number of five-leaf pairs in criterion 6")->check(CLI::Range(0, 1002));
  CLI11_PARSE(app, argc, argv);

  struct Criterion {
    std::string name;
    double budget;  // seconds
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"Fig 5 reproduction", 5, fig5},
      {"Fig 2 weak hybrid number", 1800, fig2},
      {"Fig 6 triple", 600, fig6},
      {"h_t versus h_r family, m=4", 600, theorem_family},
      {"Fig 1 and Fig 3 predicates", 5, predicates},
      {"property suite", 3600, [slice] { return properties(slice); }},
      {"parser and canonical forms", 300, round_trips},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > criteria[i].budget) {
      o.pass = false;
      o.detail += "; over the " + str(criteria[i].budget) + " s budget";
    }
    char head[128];
    std::snprintf(head, sizeof head, "criterion %d %-30s %s %9.2f s", id, criteria[i].name.c_str(),
                  o.pass ? "PASS" : "FAIL", secs);
    std::cout << head << "  " << o.detail << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
