#include "doctest.h"
#include "support.hpp"

#include <climits>

using namespace forkpick;
using namespace forkpick::testing;

namespace {

// Minimum weight over every complete op sequence, by plain enumeration.
int naive_fork_optimum(const PhyloTree& t1, const PhyloTree& t2) {
  int best = INT_MAX;
  std::vector<ForkOp> ops;
  std::function<void(const PhyloTree&, const PhyloTree&)> rec = [&](const PhyloTree& a, const PhyloTree& b) {
    if (a.leaf_count() == 1) {
      if (!decompose(ops)) return;
      const auto seq = make_fork_picking_sequence(ops);
      if (check_fork_picking_sequence(t1, t2, seq)) best = std::min(best, static_cast<int>(seq.weight()));
      return;
    }
    for (const auto& op : applicable_ops(a, b)) {
      ops.push_back(op);
      const auto [a2, b2] = apply_op(a, b, op);
      rec(a2, b2);
      ops.pop_back();
    }
  };
  rec(t1, t2);
  return best == INT_MAX ? -1 : best;
}

}  // namespace

TEST_CASE("fork-picking optimum on the figures") {
  const auto r5 = min_weight_fork_picking(data_tree("fig5_t1.nwk"), data_tree("fig5_t2.nwk"));
  REQUIRE(r5.status == SearchStatus::optimal);
  CHECK(r5.optimum == 1);
  REQUIRE(r5.witness);
  CHECK(r5.witness->weight() == 1);
  CHECK(check_fork_picking_sequence(data_tree("fig5_t1.nwk"), data_tree("fig5_t2.nwk"), *r5.witness));

  const auto r6 = min_weight_fork_picking(data_tree("fig6_t1.nwk"), data_tree("fig6_t2.nwk"));
  REQUIRE(r6.status == SearchStatus::optimal);
  CHECK(r6.optimum == 2);

  const auto t = parse_tree("(((a,b),c),(d,e));");
  const auto r0 = min_weight_fork_picking(t, t);
  CHECK(r0.optimum == 0);
  CHECK(min_weight_cherry_picking(t, t).optimum == 0);
}

TEST_CASE("cherry-picking optimum") {
  const auto t = data_tree("fig5_t1.nwk");
  const auto tp = data_tree("fig5_t2.nwk");
  const auto r = min_weight_cherry_picking(t, tp);
  REQUIRE(r.status == SearchStatus::optimal);
  CHECK(r.optimum >= 1);
  REQUIRE(r.witness);
  CHECK(check_cherry_picking_sequence(t, tp, *r.witness));
  CHECK(static_cast<int>(r.witness->ones()) == r.optimum);
  const auto brute = brute_hybrid(t, tp, Quantity::h_t, 2);
  REQUIRE(brute.value);
  CHECK(*brute.value == r.optimum);
  CHECK(verify_certificate(brute, t, tp));

  const auto [a, b] = gen_theorem_big_trees(3);
  const auto big = min_weight_cherry_picking(a, b);
  REQUIRE(big.status == SearchStatus::optimal);
  CHECK(big.optimum >= 1);
}

TEST_CASE("limits give unknown") {
  SearchOptions tiny;
  tiny.node_limit = 1;
  const auto r = min_weight_fork_picking(data_tree("fig6_t1.nwk"), data_tree("fig6_t2.nwk"), tiny);
  CHECK(r.status == SearchStatus::unknown);
  CHECK_FALSE(r.witness);
}

TEST_CASE("decide rigidly displayable") {
  CHECK(decide_rigidly_displayable(data_tree("fig5_t1.nwk"), data_tree("fig5_t2.nwk")));
  const auto t = parse_tree("((a,b),(c,d));");
  CHECK(decide_rigidly_displayable(t, t));

  const auto trees = enumerate_trees(letter_taxa(5));
  bool found = false;
  for (const auto& a : trees) {
    for (const auto& b : trees)
      if (min_weight_cherry_picking(a, b).status == SearchStatus::infeasible) {
        CHECK_FALSE(decide_rigidly_displayable(a, b));
        CHECK(min_weight_fork_picking(a, b).status == SearchStatus::infeasible);
        found = true;
        break;
      }
    if (found) break;
  }
  CHECK(found);
}

TEST_CASE("extraction") {
  const auto seq = extract_fork_picking(data_net("fig5_net.enwk"), data_tree("fig5_t1.nwk"), data_tree("fig5_t2.nwk"));
  CHECK(seq.weight() == 1);
  CHECK(check_fork_picking_sequence(data_tree("fig5_t1.nwk"), data_tree("fig5_t2.nwk"), seq));

  const auto t = parse_tree("(((a,b),c),(d,e));");
  const auto zero = extract_fork_picking(PhyloNetwork::from_tree(t), t, t);
  CHECK(zero.weight() == 0);
  for (const auto& op : zero.ops) CHECK(op.kind == 0);

  const auto t6 = data_tree("fig6_t1.nwk");
  const auto tp6 = data_tree("fig6_t2.nwk");
  const auto s6 = extract_fork_picking(data_net("fig6_net_rigid.enwk"), t6, tp6);
  CHECK(s6.weight() <= 2);
  CHECK(check_fork_picking_sequence(t6, tp6, s6));

  CHECK_THROWS_AS(extract_fork_picking(data_net("fig3_net.enwk"), data_tree("fig3_t1.nwk"), data_tree("fig3_t2.nwk")),
                  InputError);
}

TEST_CASE("solver matches plain enumeration") {
  for (int k = 3; k <= 4; ++k) {
    const auto trees = enumerate_trees(letter_taxa(k));
    for (const auto& a : trees)
      for (const auto& b : trees) {
        const auto r = min_weight_fork_picking(a, b);
        REQUIRE(r.optimum == naive_fork_optimum(a, b));
      }
  }
  const auto trees = enumerate_trees(letter_taxa(5));
  for (std::size_t i = 0; i < trees.size(); i += 9)
    for (std::size_t j = 1; j < trees.size(); j += 13) {
      const auto r = min_weight_fork_picking(trees[i], trees[j]);
      INFO(serialize(trees[i]) << " " << serialize(trees[j]));
      REQUIRE(r.optimum == naive_fork_optimum(trees[i], trees[j]));
    }
}

TEST_CASE("eager common cherries change nothing") {
  SearchOptions full;
  full.eager_common_cherries = false;
  const auto trees = enumerate_trees(letter_taxa(5));
  for (std::size_t i = 0; i < trees.size(); i += 4)
    for (std::size_t j = 0; j < trees.size(); j += 3) {
      const auto a = min_weight_fork_picking(trees[i], trees[j]);
      const auto b = min_weight_fork_picking(trees[i], trees[j], full);
      REQUIRE(a.status == b.status);
      REQUIRE(a.optimum == b.optimum);
    }
}

TEST_CASE("witnesses validate and are deterministic") {
  const auto trees = enumerate_trees(letter_taxa(5));
  for (std::size_t i = 0; i < trees.size(); i += 11)
    for (std::size_t j = 0; j < trees.size(); j += 6) {
      const auto& a = trees[i];
      const auto& b = trees[j];
      const auto r = min_weight_fork_picking(a, b);
      const auto again = min_weight_fork_picking(a, b);
      if (r.witness) {
        REQUIRE(check_fork_picking_sequence(a, b, *r.witness));
        REQUIRE(static_cast<int>(r.witness->weight()) == r.optimum);
        REQUIRE(again.witness->ops == r.witness->ops);
      }
      const auto c = min_weight_cherry_picking(a, b);
      if (c.witness) {
        REQUIRE(check_cherry_picking_sequence(a, b, *c.witness));
        REQUIRE(static_cast<int>(c.witness->ones()) == c.optimum);
      }
    }
}

TEST_CASE("node limit from the environment") {
  CHECK(default_node_limit() > 0);
}
