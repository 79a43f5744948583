#include "doctest.h"
#include "support.hpp"

#include <set>

using namespace forkpick;
using namespace forkpick::testing;

namespace {

std::set<std::string> forms(const std::vector<PhyloNetwork>& nets) {
  std::set<std::string> out;
  for (const auto& n : nets) out.insert(canonical_form(n).text);
  return out;
}

}  // namespace

TEST_CASE("tree counts") {
  const std::size_t expect[] = {0, 0, 1, 3, 15, 105, 945, 10395};
  for (int n = 2; n <= 7; ++n) CHECK(enumerate_trees(letter_taxa(n)).size() == expect[n]);
  CHECK_THROWS_AS(enumerate_trees(letter_taxa(1)), InputError);
  CHECK_THROWS_AS(enumerate_trees(letter_taxa(8)), InputError);
}

TEST_CASE("trees are distinct") {
  const auto trees = enumerate_trees(letter_taxa(6));
  std::set<std::string> seen;
  for (const auto& t : trees) CHECK(seen.insert(canonical_form(t).text).second);
}

TEST_CASE("level zero is the trees") {
  for (const auto cls : {NetworkClass::general, NetworkClass::tree_child, NetworkClass::temporal_tree_child}) {
    const auto nets = enumerate_networks(letter_taxa(4), 0, cls);
    CHECK(nets.size() == 15);
    for (const auto& n : nets) CHECK(n.as_tree());
  }
}

TEST_CASE("network counts match the DAG search") {
  for (const auto& [n, h] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {3, 2}, {4, 1}})
    CHECK(enumerate_networks(letter_taxa(n), h, NetworkClass::general).size() == count_networks_by_dag_search(n, h));
}

TEST_CASE("class filters nest") {
  for (int h = 1; h <= 2; ++h) {
    const auto g = forms(enumerate_networks(letter_taxa(3), h, NetworkClass::general));
    const auto tc = forms(enumerate_networks(letter_taxa(3), h, NetworkClass::tree_child));
    const auto ttc = forms(enumerate_networks(letter_taxa(3), h, NetworkClass::temporal_tree_child));
    CHECK(std::includes(g.begin(), g.end(), tc.begin(), tc.end()));
    CHECK(std::includes(tc.begin(), tc.end(), ttc.begin(), ttc.end()));
    CHECK(ttc.size() < g.size());
  }
}

TEST_CASE("enumerated networks are valid and in class") {
  for (int h = 0; h <= 2; ++h) {
    for (const auto& n : enumerate_networks(letter_taxa(4), h, NetworkClass::general)) {
      REQUIRE(validate(n).is_valid_network);
      REQUIRE(n.reticulation_count() == static_cast<std::size_t>(h));
    }
    for (const auto& n : enumerate_networks(letter_taxa(4), h, NetworkClass::temporal_tree_child))
      REQUIRE(is_temporal_tree_child(n));
  }
}

TEST_CASE("stream visits every class") {
  NetworkEnumerator e(letter_taxa(4), NetworkClass::temporal_tree_child);
  std::set<std::string> seen;
  e.stream(2, [&](const PhyloNetwork& n) {
    seen.insert(canonical_form(n).text);
    return true;
  });
  CHECK(seen == forms(e.level(2)));
}

TEST_CASE("brute hybrid on the figures") {
  const auto t6 = data_tree("fig6_t1.nwk");
  const auto tp6 = data_tree("fig6_t2.nwk");
  const auto wd = brute_hybrid(t6, tp6, Quantity::h_wd, 2);
  REQUIRE(wd.value);
  CHECK(*wd.value == 1);
  CHECK(verify_certificate(wd, t6, tp6));
  const auto r = brute_hybrid(t6, tp6, Quantity::h_r, 3);
  REQUIRE(r.value);
  CHECK(*r.value == 2);
  CHECK(verify_certificate(r, t6, tp6));

  const auto t2 = data_tree("fig2_t1.nwk");
  const auto tp2 = data_tree("fig2_t2.nwk");
  const auto w2 = brute_hybrid(t2, tp2, Quantity::h_wd, 2);
  REQUIRE(w2.value);
  CHECK(*w2.value == 2);
  CHECK(verify_certificate(w2, t2, tp2));

  const auto capped = brute_hybrid(t6, tp6, Quantity::h_r, 1);
  CHECK_FALSE(capped.value);
  CHECK_FALSE(capped.network);
}

TEST_CASE("rigid number is at most the temporal number") {
  const auto trees = enumerate_trees(letter_taxa(4));
  for (const auto& a : trees)
    for (const auto& b : trees) {
      const auto r = brute_hybrid(a, b, Quantity::h_r, 3);
      const auto t = brute_hybrid(a, b, Quantity::h_t, 3);
      REQUIRE(r.value.has_value() == t.value.has_value());
      if (t.value) {
        REQUIRE(*r.value <= *t.value);
        REQUIRE(verify_certificate(r, a, b));
        REQUIRE(verify_certificate(t, a, b));
        const auto c = min_weight_cherry_picking(a, b);
        REQUIRE(c.optimum == *t.value);
      }
    }
}

TEST_CASE("theorem family") {
  const auto [t3, tp3] = gen_theorem_big_trees(3);
  CHECK(t3.leaf_count() == 10);
  CHECK(tp3.leaf_count() == 10);
  CHECK_FALSE(isomorphic(t3, tp3));

  const auto [t4, tp4] = gen_theorem_big_trees(4);
  CHECK(t4.leaf_count() == 18);
  CHECK(serialize(t4) == serialize(data_tree("thm_m4_t.nwk")));
  CHECK(serialize(tp4) == serialize(data_tree("thm_m4_tprime.nwk")));
  CHECK_FALSE(isomorphic(t4, tp4));

  for (int m = 3; m <= 5; ++m) {
    const auto [t, tp] = gen_theorem_big_trees(m);
    const auto net = theorem_big_network(m);
    CHECK(t.leaf_count() == (1u << m) + 2);
    CHECK(net.reticulation_count() == 1);
    CHECK(is_temporal_tree_child(net));
    const auto pair = rigidly_displays(net, t, tp);
    REQUIRE(pair);
    if (m > 4) continue;  // extraction enumerates special sequences below the reticulation
    const auto seq = extract_fork_picking(net, t, tp, pair);
    CHECK(seq.weight() == 1);
    CHECK(check_fork_picking_sequence(t, tp, seq));
  }
  CHECK_THROWS_AS(gen_theorem_big_trees(2), InputError);
}

TEST_CASE("out-of-range enumeration") {
  CHECK_THROWS_AS(enumerate_networks(letter_taxa(7), 1, NetworkClass::general), InputError);
  CHECK_THROWS_AS(enumerate_networks(letter_taxa(3), 4, NetworkClass::general), InputError);
}
