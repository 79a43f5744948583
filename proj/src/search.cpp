#include "forkpick/search.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <limits>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "forkpick/detail/pair_context.hpp"
#include "forkpick/detail/special.hpp"
#include "forkpick/errors.hpp"
#include "forkpick/netcheck.hpp"

namespace forkpick {

using detail::bit;
using detail::Mask;
using detail::PairContext;
using detail::popcount;
using detail::RawOp;

namespace detail {

SpecialFinder::SpecialFinder(const PairContext& ctx, const SpecialOptions& options, Mask start, Mask allowed)
    : ctx_(ctx), options_(options), start_(start), allowed_(allowed & start) {
  if (popcount(start_) < 3) return;
  const auto views = ctx_.views(start_);
  for (const auto& op : ctx_.ops(views, start_)) {
    if (op.kind == 1 && (allowed_ & bit(op.x))) record(bit(op.x), {op});
  }
  std::vector<RawOp> prefix;
  for (int side = 0; side < 2; ++side) {
    visited_.clear();
    dfs(side, start_, prefix);
  }
}

void SpecialFinder::record(Mask removed, std::vector<RawOp> ops) {
  if (found_.count(removed)) return;
  found_.emplace(removed, std::move(ops));
}

void SpecialFinder::dfs(int side, Mask m, std::vector<RawOp>& prefix) {
  const auto views = ctx_.views(m);
  if (!prefix.empty() && prefix.back().kind == 2) close(side, m, views, prefix);
  if (popcount(m) < 4) return;
  if (!visited_.insert(m).second) return;
  for (const auto& op : ctx_.ops(views, m)) {
    if ((op.kind != 2 && op.kind != 3) || op.side != side || !(allowed_ & bit(op.x))) continue;
    prefix.push_back(op);
    dfs(side, m & ~bit(op.x), prefix);
    prefix.pop_back();
  }
}

void SpecialFinder::close(int side, Mask m, const PairContext::Views& views, std::vector<RawOp>& prefix) {
  const RawOp& prev = prefix.back();
  const int p = prev.fork()[0];
  const int xl = prev.fork()[2];
  if (!(allowed_ & bit(xl))) return;
  const int c0 = views.v[0].partner(xl), c1 = views.v[1].partner(xl);
  if (c0 < 0 || c1 < 0 || c0 == c1) return;
  if ((side == 0 ? c0 : c1) != p) return;
  if (options_.lca_rule == LcaRule::nested && prefix.size() >= 2) {
    const Mask scope = options_.lca_tree == LcaTree::full ? ctx_.full() : start_;
    const auto view = ctx_.tree(side).view(scope);
    const Mask below = view.cluster(view.lca(bit(prev.x) | bit(xl)));
    for (std::size_t i = 0; i + 1 < prefix.size(); ++i)
      if (!(below & bit(prefix[i].x))) return;
  }
  RawOp last;
  last.kind = 1;
  last.x = xl;
  last.n1 = last.n2 = 2;
  last.w1 = {xl, c0, -1, -1};
  last.w2 = {xl, c1, -1, -1};
  auto ops = prefix;
  ops.push_back(last);
  record((start_ & ~m) | bit(xl), std::move(ops));
}

}  // namespace detail

std::size_t default_node_limit() {
  if (const char* env = std::getenv("FORKPICK_NODE_LIMIT")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return SearchOptions{}.node_limit;
}

namespace {

constexpr int kInfinity = std::numeric_limits<int>::max() / 4;

struct LimitReached {};

class Budget {
 public:
  explicit Budget(const SearchOptions& o)
      : node_limit_(o.node_limit), time_limit_(o.time_limit_seconds), start_(std::chrono::steady_clock::now()) {}

  void tick(SearchStats& stats) {
    ++stats.nodes;
    if (stats.nodes > node_limit_) throw LimitReached{};
    if (time_limit_ > 0 && (stats.nodes & 255) == 0 && elapsed() > time_limit_) throw LimitReached{};
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::size_t node_limit_;
  double time_limit_;
  std::chrono::steady_clock::time_point start_;
};

class ForkSolver {
 public:
  ForkSolver(const PairContext& ctx, const SearchOptions& options) : ctx_(ctx), options_(options), budget_(options) {}

  int solve(Mask m) {
    auto it = memo_.find(m);
    if (it != memo_.end()) {
      ++stats.memo_hits;
      return it->second;
    }
    budget_.tick(stats);
    Choice best;
    best.value = kInfinity;
    if (popcount(m) == 1) {
      best.value = 0;
    } else if (options_.eager_common_cherries) {
      Mask r = m;
      std::vector<RawOp> zeros;
      while (popcount(r) > 1) {
        const auto common = ctx_.common_cherry_ops(ctx_.views(r), r);
        if (common.empty()) break;
        zeros.push_back(common.front());
        r &= ~bit(common.front().x);
      }
      if (popcount(r) == 1) {
        best = {0, zeros, r};
      } else {
        const detail::SpecialFinder finder(ctx_, options_.special, r, r);
        for (const auto& [removed, ops] : finder.found()) {
          const int sub = solve(r & ~removed);
          if (sub < kInfinity && sub + 1 < best.value) {
            best.value = sub + 1;
            best.ops = zeros;
            best.ops.insert(best.ops.end(), ops.begin(), ops.end());
            best.next = r & ~removed;
          }
        }
      }
    } else {
      for (const auto& op : ctx_.common_cherry_ops(ctx_.views(m), m)) {
        const int sub = solve(m & ~bit(op.x));
        if (sub < best.value) best = {sub, {op}, m & ~bit(op.x)};
      }
      const detail::SpecialFinder finder(ctx_, options_.special, m, m);
      for (const auto& [removed, ops] : finder.found()) {
        const int sub = solve(m & ~removed);
        if (sub < kInfinity && sub + 1 < best.value) best = {sub + 1, ops, m & ~removed};
      }
    }
    memo_.emplace(m, best.value);
    choice_.emplace(m, std::move(best));
    return memo_[m];
  }

  std::vector<ForkOp> witness(Mask m) const {
    std::vector<ForkOp> out;
    while (popcount(m) > 1) {
      const Choice& c = choice_.at(m);
      for (const auto& op : c.ops) out.push_back(ctx_.to_public(op));
      if (c.next == m) break;
      m = c.next;
    }
    return out;
  }

  SearchStats stats;

 private:
  struct Choice {
    int value = kInfinity;
    std::vector<RawOp> ops;
    Mask next = 0;
  };

  const PairContext& ctx_;
  const SearchOptions& options_;
  Budget budget_;
  std::unordered_map<Mask, int> memo_;
  std::unordered_map<Mask, Choice> choice_;

 public:
  double elapsed() const { return budget_.elapsed(); }
};

class CherrySolver {
 public:
  CherrySolver(const PairContext& ctx, const SearchOptions& options) : ctx_(ctx), budget_(options) {
    if (ctx.size() <= 24) dense_.assign(std::size_t{1} << ctx.size(), -1);
  }

  int solve(Mask m) {
    if (popcount(m) == 1) return 0;
    if (const int* cached = lookup(m)) {
      ++stats.memo_hits;
      return *cached;
    }
    budget_.tick(stats);
    const auto views = ctx_.views(m);
    int best = kInfinity;
    for (int x = 0; x < ctx_.size(); ++x) {
      if (!(m & bit(x))) continue;
      const int p1 = views.v[0].partner(x), p2 = views.v[1].partner(x);
      if (p1 < 0 || p2 < 0) continue;
      const int cost = p1 != p2 ? 1 : 0;
      if (cost >= best) continue;
      const int sub = solve(m & ~bit(x));
      if (sub < kInfinity) best = std::min(best, sub + cost);
    }
    store(m, best);
    return best;
  }

  CherryPickingSequence witness(Mask m) {
    CherryPickingSequence cps;
    while (popcount(m) > 1) {
      const int target = solve(m);
      const auto views = ctx_.views(m);
      bool advanced = false;
      for (int x = 0; x < ctx_.size() && !advanced; ++x) {
        if (!(m & bit(x))) continue;
        const int p1 = views.v[0].partner(x), p2 = views.v[1].partner(x);
        if (p1 < 0 || p2 < 0) continue;
        const int cost = p1 != p2 ? 1 : 0;
        const int sub = solve(m & ~bit(x));
        if (sub < kInfinity && sub + cost == target) {
          cps.order.push_back(ctx_.taxa()[x]);
          cps.counts.push_back(cost);
          m &= ~bit(x);
          advanced = true;
        }
      }
      if (!advanced) throw ConstructionError("cherry-picking witness reconstruction failed");
    }
    return cps;
  }

  double elapsed() const { return budget_.elapsed(); }

  SearchStats stats;

 private:
  const int* lookup(Mask m) const {
    if (!dense_.empty()) {
      const auto& v = dense_[m];
      return v >= 0 ? &v : nullptr;
    }
    auto it = sparse_.find(m);
    return it == sparse_.end() ? nullptr : &it->second;
  }

  void store(Mask m, int v) {
    if (!dense_.empty()) {
      dense_[m] = v;
    } else {
      sparse_[m] = v;
    }
  }

  const PairContext& ctx_;
  Budget budget_;
  std::vector<int> dense_;
  std::unordered_map<Mask, int> sparse_;
};

}  // namespace

ForkSearchResult min_weight_fork_picking(const PhyloTree& t1, const PhyloTree& t2, const SearchOptions& options) {
  const PairContext ctx(t1, t2);
  if (ctx.size() < 2) throw InputError("trees need at least two leaves");
  ForkSearchResult result;
  ForkSolver solver(ctx, options);
  try {
    const int v = solver.solve(ctx.full());
    if (v >= kInfinity) {
      result.status = SearchStatus::infeasible;
    } else {
      result.status = SearchStatus::optimal;
      result.optimum = v;
      result.witness = make_fork_picking_sequence(solver.witness(ctx.full()));
    }
  } catch (const LimitReached&) {
    result.status = SearchStatus::unknown;
  }
  result.stats = solver.stats;
  result.stats.elapsed_seconds = solver.elapsed();
  return result;
}

CherrySearchResult min_weight_cherry_picking(const PhyloTree& t1, const PhyloTree& t2, const SearchOptions& options) {
  const PairContext ctx(t1, t2);
  if (ctx.size() < 2) throw InputError("trees need at least two leaves");
  CherrySearchResult result;
  CherrySolver solver(ctx, options);
  try {
    const int v = solver.solve(ctx.full());
    if (v >= kInfinity) {
      result.status = SearchStatus::infeasible;
    } else {
      result.status = SearchStatus::optimal;
      result.optimum = v;
      result.witness = solver.witness(ctx.full());
    }
  } catch (const LimitReached&) {
    result.status = SearchStatus::unknown;
  }
  result.stats = solver.stats;
  result.stats.elapsed_seconds = solver.elapsed();
  return result;
}

bool decide_rigidly_displayable(const PhyloTree& t1, const PhyloTree& t2) {
  SearchOptions options;
  options.node_limit = std::numeric_limits<std::size_t>::max();
  return min_weight_cherry_picking(t1, t2, options).status == SearchStatus::optimal;
}

std::vector<std::vector<ForkOp>> special_sequences(const PhyloTree& t1, const PhyloTree& t2,
                                                   const SpecialOptions& options) {
  const PairContext ctx(t1, t2);
  const detail::SpecialFinder finder(ctx, options, ctx.full(), ctx.full());
  std::vector<std::vector<ForkOp>> out;
  for (const auto& [removed, ops] : finder.found()) {
    std::vector<ForkOp> seq;
    for (const auto& op : ops) seq.push_back(ctx.to_public(op));
    out.push_back(std::move(seq));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- extraction -------------------------------------------------------------

namespace {

std::vector<std::string> labels_of(const PairContext& ctx, Mask m) {
  std::vector<std::string> out;
  for (int i = 0; i < ctx.size(); ++i)
    if (m & bit(i)) out.push_back(ctx.taxa()[i]);
  return out;
}

Mask leaves_below(const PairContext& ctx, const PhyloNetwork& net, VertexId v) {
  Mask m = 0;
  std::vector<char> seen(net.vertex_count(), 0);
  std::vector<VertexId> stack{v};
  while (!stack.empty()) {
    const VertexId u = stack.back();
    stack.pop_back();
    if (seen[u]) continue;
    seen[u] = 1;
    if (net.children(u).empty()) m |= bit(ctx.index_of(net.label(u)));
    for (VertexId c : net.children(u)) stack.push_back(c);
  }
  return m;
}

// Reticulations ordered by decreasing time, then by id.
std::vector<VertexId> reticulations_by_time(const PhyloNetwork& net) {
  auto rets = net.reticulations();
  const auto times = temporal_labelling(net);
  std::stable_sort(rets.begin(), rets.end(), [&](VertexId a, VertexId b) {
    return times ? (*times)[a] > (*times)[b] : a < b;
  });
  return rets;
}

bool acceptable_reduction(const PhyloNetwork& reduced, std::size_t h_before, const PhyloTree& r1, const PhyloTree& r2) {
  if (reduced.reticulation_count() + 1 > h_before) return false;
  if (!validate(reduced).is_valid_network || !is_temporal_tree_child(reduced)) return false;
  return rigidly_displays(reduced, r1, r2).has_value();
}

}  // namespace

ForkPickingSequence extract_fork_picking(const PhyloNetwork& net, const PhyloTree& t1, const PhyloTree& t2,
                                         const std::optional<MapPair>& witnesses, const SpecialOptions& options) {
  const PairContext ctx(t1, t2);
  if (net.leaf_labels() != ctx.taxa()) throw InputError("network and trees have different leaf sets");
  if (!validate(net).is_valid_network) throw InputError("input is not a phylogenetic network");
  if (!is_temporal_tree_child(net)) throw InputError("network is not temporal tree-child");
  if (witnesses) {
    if (!check_display_map(t1, net, witnesses->first) || !check_display_map(t2, net, witnesses->second) ||
        !is_rigid_pair(net, witnesses->first, witnesses->second))
      throw InputError("given witnesses do not rigidly display the trees");
  } else if (!rigidly_displays(net, t1, t2)) {
    throw InputError("network does not rigidly display the trees");
  }

  std::vector<ForkOp> ops;
  PhyloNetwork current = net;
  Mask m = ctx.full();
  while (popcount(m) > 1) {
    const auto common = ctx.common_cherry_ops(ctx.views(m), m);
    if (!common.empty()) {
      const RawOp& op = common.front();
      ops.push_back(ctx.to_public(op));
      const std::string leaf = ctx.taxa()[op.x];
      current = remove_leaves(current, std::span<const std::string>(&leaf, 1));
      m &= ~bit(op.x);
      continue;
    }
    const std::size_t h = current.reticulation_count();
    if (h == 0) throw ConstructionError("extraction: no common cherry although the network is a tree");
    const auto r1 = [&](Mask rest) { return restrict_to(t1, labels_of(ctx, rest)); };
    const auto r2 = [&](Mask rest) { return restrict_to(t2, labels_of(ctx, rest)); };

    // Candidate scopes: leaves below the latest reticulations first, then anything.
    std::vector<Mask> scopes;
    for (VertexId v : reticulations_by_time(current)) scopes.push_back(leaves_below(ctx, current, v) & m);
    scopes.push_back(m);

    bool done = false;
    for (Mask scope : scopes) {
      const detail::SpecialFinder finder(ctx, options, m, scope);
      std::vector<std::pair<Mask, const std::vector<RawOp>*>> candidates;
      for (const auto& [removed, seq] : finder.found()) candidates.emplace_back(removed, &seq);
      // Prefer removing the whole scope, then larger removals.
      std::stable_sort(candidates.begin(), candidates.end(), [&](const auto& a, const auto& b) {
        const bool fa = a.first == scope, fb = b.first == scope;
        if (fa != fb) return fa;
        return popcount(a.first) > popcount(b.first);
      });
      for (const auto& [removed, seq] : candidates) {
        const auto gone = labels_of(ctx, removed);
        auto reduced = remove_leaves(current, gone);
        const Mask rest = m & ~removed;
        if (!acceptable_reduction(reduced, h, r1(rest), r2(rest))) continue;
        for (const auto& op : *seq) ops.push_back(ctx.to_public(op));
        current = std::move(reduced);
        m = rest;
        done = true;
        break;
      }
      if (done) break;
    }
    if (!done) throw ConstructionError("extraction: no special sequence reduces the network");
  }

  auto seq = make_fork_picking_sequence(std::move(ops));
  const auto verdict = check_fork_picking_sequence(t1, t2, seq, options);
  if (!verdict) throw ConstructionError("extraction produced an invalid sequence: " + verdict.reason);
  if (seq.weight() > net.reticulation_count()) throw ConstructionError("extraction weight exceeds h(N)");
  return seq;
}

}  // namespace forkpick
